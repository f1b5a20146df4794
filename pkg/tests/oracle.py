"""Independent reference evaluations in extended precision.

Written against the textbook formulas directly; shares no code with the
package under test.
"""

from mpmath import mp, mpf, log, exp

mp.dps = 40

TEN = mpf(10)


def lg(x):
    return log(mpf(x), 10)


def a_hm(f_mhz, h_m):
    return (mpf("1.1") * lg(f_mhz) - mpf("0.7")) * mpf(h_m) - (mpf("1.56") * lg(f_mhz) - mpf("0.8"))


def hata(f_mhz, h_b, h_m, d_km, shadow_db=0, pen_db=0):
    terms = [
        mpf("36.55"),
        mpf("26.16") * lg(f_mhz),
        -mpf("3.82") * lg(h_b),
        -a_hm(f_mhz, h_m),
        (mpf("44.9") - mpf("6.55") * lg(h_b)) * lg(d_km),
        mpf(shadow_db),
        mpf(pen_db),
    ]
    return sum(terms)


def femto(f_mhz, n_coeff, d_m, walls=0):
    return 20 * lg(f_mhz) + mpf(n_coeff) * lg(d_m) + 4 * mpf(walls) ** 2 - 28


def dbm_to_w(dbm):
    return TEN ** ((mpf(dbm) - 30) / 10)


def noise_w(bandwidth_hz, nf_db):
    return dbm_to_w(-174 + 10 * lg(bandwidth_hz) + mpf(nf_db))


def outage(gamma, snir):
    return 1 - exp(-mpf(gamma) / mpf(snir))


def shannon(snir):
    return log(1 + mpf(snir), 2)


def to_db(x):
    return 10 * lg(x)


def deterministic_point(cfg, distance_m):
    """Closed-form chain at one distance with shadowing switched off."""
    m = cfg.macro
    n = noise_w(cfg.noise.bandwidth_hz, cfg.noise.noise_figure_db)
    d_km = mpf(distance_m) / 1000
    l_ms = hata(m.carrier_freq_mhz, m.bs_height_m, m.ms_height_m, d_km, 0, m.penetration_loss_db)
    l_tr = hata(m.carrier_freq_mhz, m.bs_height_m, cfg.outside_transceiver.height_m, d_km)
    walls = cfg.femto.wall_count if cfg.femto_through_wall else 0
    l_f = femto(cfg.femto.carrier_freq_mhz, cfg.femto.distance_decay_coeff, cfg.fap_ms_distance_m, walls)

    g_bs, g_ms = cfg.macro_bs.antenna_gain_dbi, cfg.ms.antenna_gain_dbi
    g_tr, g_fap = cfg.outside_transceiver.antenna_gain_dbi, cfg.fap.antenna_gain_dbi
    s_direct = dbm_to_w(cfg.macro_bs.tx_power_dbm + g_bs + g_ms - l_ms) / n
    s_bh = dbm_to_w(cfg.macro_bs.tx_power_dbm + g_bs + g_tr - l_tr) / n
    s_acc = dbm_to_w(cfg.fap.tx_power_dbm + g_fap + g_ms - l_f) / (n + mpf(cfg.noise.femto_interference_w))
    s_ul_direct = dbm_to_w(cfg.ms.tx_power_dbm + g_bs + g_ms - l_ms) / n
    s_ul_bh = dbm_to_w(cfg.outside_transceiver.tx_power_dbm + g_bs + g_tr - l_tr) / n

    p_direct = outage(cfg.gamma_ms, s_direct)
    p_bh = outage(cfg.gamma_transceiver, s_bh)
    p_acc = outage(cfg.gamma_ms, s_acc)
    return {
        "distance_m": mpf(distance_m),
        "snir_db_direct": to_db(s_direct),
        "snir_db_femto_access": to_db(s_acc),
        "snir_db_backhaul": to_db(s_bh),
        "ce_bpshz_direct": shannon(s_ul_direct),
        "ce_bpshz_relayed": shannon(s_ul_bh),
        "outage_direct": p_direct,
        "outage_relayed": 1 - (1 - p_bh) * (1 - p_acc),
    }
