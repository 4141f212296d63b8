"""Independent reference computations for values frozen into the C++ tests.

Run with: python3 tests/oracles/reference_values.py
Uses numpy/scipy only; shares no code with the library.
"""
import numpy as np
from scipy.spatial.transform import Rotation

A_WGS = 6378137.0
F_WGS = 1 / 298.257223563
E2 = F_WGS * (2 - F_WGS)
C = 299792458.0


def ecef(lat, lon, h):
    lat, lon = np.radians(lat), np.radians(lon)
    n = A_WGS / np.sqrt(1 - E2 * np.sin(lat) ** 2)
    return np.array([(n + h) * np.cos(lat) * np.cos(lon),
                     (n + h) * np.cos(lat) * np.sin(lon),
                     (n * (1 - E2) + h) * np.sin(lat)])


def enu_to_ecef(origin, e, n, u):
    lat, lon = np.radians(origin[0]), np.radians(origin[1])
    rot = np.array([[-np.sin(lon), -np.sin(lat) * np.cos(lon), np.cos(lat) * np.cos(lon)],
                    [np.cos(lon), -np.sin(lat) * np.sin(lon), np.cos(lat) * np.sin(lon)],
                    [0, np.cos(lat), np.sin(lat)]])
    return ecef(*origin) + rot @ np.array([e, n, u])


def panel_angles(frm, to, az, tilt):
    d = np.asarray(to, float) - np.asarray(frm, float)
    d /= np.linalg.norm(d)
    panel = Rotation.from_euler("ZY", [az, tilt], degrees=True)
    p = panel.inv().apply(d)
    return np.degrees(np.arccos(p[2])), np.degrees(np.arctan2(p[1], p[0]))


def element_db(theta, phi):
    ah = -min(12 * (phi / 65) ** 2, 30)
    av = -min(12 * ((theta - 90) / 65) ** 2, 30)
    return 8 - min(-(ah + av), 30)


def array_db(theta, phi, nv=8, nh=8, etilt=0.0, escan=0.0, d=0.5):
    th, ph = np.radians(theta), np.radians(phi)
    et, es = np.radians(etilt), np.radians(escan)
    total = 0j
    for n in range(nv):
        for m in range(nh):
            v = np.exp(1j * 2 * np.pi * (n * d * np.cos(th) + m * d * np.sin(th) * np.sin(ph)))
            w = np.exp(1j * 2 * np.pi * (n * d * np.sin(et) - m * d * np.cos(et) * np.sin(es))) / np.sqrt(nv * nh)
            total += w * v
    return element_db(theta, phi) + 10 * np.log10(abs(total) ** 2)


def power(v, p0=79.86, pi=88.63, utip=120, v0=4.03, d0=0.6, rho=1.225, s=0.05, area=0.503):
    blade = p0 * (1 + 3 * v ** 2 / utip ** 2)
    induced = pi * np.sqrt(np.sqrt(1 + v ** 4 / (4 * v0 ** 4)) - v ** 2 / (2 * v0 ** 2))
    parasite = 0.5 * d0 * rho * s * area * v ** 3
    return blade, induced, parasite, blade + induced + parasite


if __name__ == "__main__":
    np.set_printoptions(precision=17)
    print("ecef(45.4,-75.7,0)", repr(ecef(45.4, -75.7, 0.0).tolist()))
    print("panel angles", repr(panel_angles((0, 0, 25), (1000, 0, 150), 0, 10)))
    print("panel angles rotated az=37", repr(panel_angles((10, 20, 25), (-300, 400, 150), 37, 10)))

    sat = ecef(0.0, -111.1, 35786e3)
    bc = ecef(50.0, -70.0, 0.0)
    def off(t):
        u, v = bc - sat, t - sat
        return np.degrees(np.arccos(np.clip(u @ v / np.linalg.norm(u) / np.linalg.norm(v), -1, 1)))
    origin = (45.4, -75.7, 0.0)
    offs = [off(enu_to_ecef(origin, x, y, 150)) for x in np.linspace(60, 2940, 25) for y in np.linspace(60, 2940, 25)]
    print("off-boresight at (60,60,150)", repr(off(enu_to_ecef(origin, 60, 60, 150))))
    print("off-boresight range", min(offs), max(offs), max(offs) - min(offs))

    print("array(60,30) etilt0", repr(array_db(60, 30)))
    print("array(60,30) etilt10", repr(array_db(60, 30, etilt=10)))
    print("array steered etilt10", repr(array_db(100, 0, etilt=10)))

    print("power(0)", power(0.0))
    print("power(30)", power(30.0))
    b, i, p, tot = power(30.0)
    print("trip(30, 4072.94)", tot * 4072.94 / 30)
    print("E_A", 500e3 - 50e3 - 2 * tot * 150 / 30)

    print("fspl(2.1GHz,38000km)", 20 * np.log10(4 * np.pi * 38000e3 * 2.1e9 / C))
    print("uma(1000, 2.545GHz)", 28.0 + 22 * np.log10(1000) + 20 * np.log10(2.545))
    print("rma slope h=150", max(23.9 - 1.8 * np.log10(150), 20), 23.9 - 1.8 * np.log10(150))
    print("diag path", 24 * 120 * np.sqrt(2), (8 + 20 * np.sqrt(2)) * 120)

    def geo_snr(e, n, u, bw=250e3, gmax=51.0, w=0.8):
        t = enu_to_ecef(origin, e, n, u)
        g = gmax - 12 * (off(t) / w) ** 2
        fspl = 20 * np.log10(4 * np.pi * np.linalg.norm(t - sat) * 2.1e9 / C)
        return 30 + g - fspl - 4.0 - (-173.9 + 10 * np.log10(bw))
    print("geo snr (60,60,150)", repr(geo_snr(60, 60, 150)))
    print("geo snr (1500,1500,150)", repr(geo_snr(1500, 1500, 150)))

    def pathloss(site, uav, urban):
        d3 = np.linalg.norm(np.asarray(uav, float) - np.asarray(site, float))
        if urban:
            return 28.0 + 22 * np.log10(d3) + 20 * np.log10(2.545)
        return max(23.9 - 1.8 * np.log10(uav[2]), 20) * np.log10(d3) + 20 * np.log10(40 * np.pi * 2.545 / 3)

    def rx_mw(site, azs, uav, urban):
        best = max(10 ** (array_db(*panel_angles(site, uav, az, 10)) / 10) for az in azs)
        return 10 ** ((43 - pathloss(site, uav, urban)) / 10) * best
    # Three sites on a 5x5 grid (600 m cells); UAV at the center of cell (row 1, col 2).
    sites = [((500, 500, 25), (0, 120, 240), True),
             ((2000, 1500, 35), (30, 150, 270), False),
             ((2500, 300, 25), (45, 165, 285), True)]
    uav = (1500, 900, 150)
    rx = [rx_mw(p, az, uav, urban) for p, az, urban in sites]
    noise = 10 ** ((-173.9 + 10 * np.log10(10e6)) / 10)
    for b in range(3):
        print("sinr site%d" % b, repr(10 * np.log10(rx[b] / (sum(rx) - rx[b] + noise))))
