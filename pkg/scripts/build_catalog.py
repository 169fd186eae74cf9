"""Regenerate the bundled HITRAN-format line catalog.

The bundled catalog is a curated set of H2O and O2 lines between 22 GHz and
1 THz. Line centres, strengths and pressure-broadening coefficients are taken
from the ITU-R P.676-12 Annex 1 spectroscopic tables and rewritten as
HITRAN 2004 fixed-width (160 character) records so that the regular
``.par`` parser reads them.

Strength conversion: the ITU strength (kHz, per hPa of the absorbing gas at
296 K) is mapped to a HITRAN intensity (cm^-1 / (molecule cm^-2)) by matching
the on-resonance power absorption of the line-by-line model in
:mod:`linklab.atmosphere` to the ITU expression ``0.182 f S F`` (dB/km):

    S_hitran = 4 pi^2 f0 S_ITU / (n c^2 1e-2)

with ``n`` the number density of the gas. Widths are converted from
GHz/hPa to cm^-1/atm. Einstein A and lower-state energies are not used by the
model and are written as zero.

Usage::

    python scripts/build_catalog.py [output_dir]
"""

import math
import sys
from pathlib import Path

C = 299792458.0
K_B = 1.380649e-23
T_REF = 296.0
HPA_PER_ATM = 1013.25
GHZ_PER_WAVENUMBER = C * 100 / 1e9
O2_FRACTION = 0.2095

# f0 [GHz], a1 [kHz/hPa], a2, a3 [GHz/hPa * 1e4]
OXYGEN = [
    (50.474214, 0.975, 9.651, 6.69),
    (50.987745, 2.529, 8.653, 7.17),
    (51.50336, 6.193, 7.709, 7.64),
    (52.021429, 14.32, 6.819, 8.11),
    (52.542418, 31.24, 5.983, 8.58),
    (53.066934, 64.29, 5.201, 9.06),
    (53.595775, 124.6, 4.474, 9.55),
    (54.130025, 227.3, 3.8, 9.96),
    (54.67118, 389.7, 3.182, 10.37),
    (55.221384, 627.1, 2.618, 10.89),
    (55.783815, 945.3, 2.109, 11.34),
    (56.264774, 543.4, 0.014, 17.03),
    (56.363399, 1331.8, 1.654, 11.89),
    (56.968211, 1746.6, 1.255, 12.23),
    (57.612486, 2120.1, 0.91, 12.62),
    (58.323877, 2363.7, 0.621, 12.95),
    (58.446588, 1442.1, 0.083, 14.91),
    (59.164204, 2379.9, 0.387, 13.53),
    (59.590983, 2090.7, 0.207, 14.08),
    (60.306056, 2103.4, 0.207, 14.15),
    (60.434778, 2438.0, 0.386, 13.39),
    (61.150562, 2479.5, 0.621, 12.92),
    (61.800158, 2275.9, 0.91, 12.63),
    (62.41122, 1915.4, 1.255, 12.17),
    (62.486253, 1503.0, 0.083, 15.13),
    (62.997984, 1490.2, 1.654, 11.74),
    (63.568526, 1078.0, 2.108, 11.34),
    (64.127775, 728.7, 2.617, 10.88),
    (64.67891, 461.3, 3.181, 10.38),
    (65.224078, 274.0, 3.8, 9.96),
    (65.764779, 153.0, 4.473, 9.55),
    (66.302096, 80.4, 5.2, 9.06),
    (66.836834, 39.8, 5.982, 8.58),
    (67.369601, 18.56, 6.818, 8.11),
    (67.900868, 8.172, 7.708, 7.64),
    (68.431006, 3.397, 8.652, 7.17),
    (68.960312, 1.334, 9.65, 6.69),
    (118.750334, 940.3, 0.01, 16.64),
    (368.498246, 67.4, 0.048, 16.4),
    (424.76302, 637.7, 0.044, 16.4),
    (487.249273, 237.4, 0.049, 16.0),
    (715.392902, 98.1, 0.145, 16.0),
    (773.83949, 572.3, 0.141, 16.2),
    (834.145546, 183.1, 0.145, 14.7),
]

# f0 [GHz], b1 [kHz/hPa], b2, b3 [GHz/hPa * 1e4], b4, b5, b6
WATER = [
    (22.23508, 0.1079, 2.144, 26.38, 0.76, 5.087, 1.0),
    (67.80396, 0.0011, 8.732, 28.58, 0.69, 4.93, 0.82),
    (119.99594, 0.0007, 8.353, 29.48, 0.7, 4.78, 0.79),
    (183.310087, 2.273, 0.668, 29.06, 0.77, 5.022, 0.85),
    (321.22563, 0.047, 6.179, 24.04, 0.67, 4.398, 0.54),
    (325.152888, 1.514, 1.541, 28.23, 0.64, 4.893, 0.74),
    (336.227764, 0.001, 9.825, 26.93, 0.69, 4.74, 0.61),
    (380.197353, 11.67, 1.048, 28.11, 0.54, 5.063, 0.89),
    (390.134508, 0.0045, 7.347, 21.52, 0.63, 4.81, 0.55),
    (437.346667, 0.0632, 5.048, 18.45, 0.6, 4.23, 0.48),
    (439.150807, 0.9098, 3.595, 20.07, 0.63, 4.483, 0.52),
    (443.018343, 0.192, 5.048, 15.55, 0.6, 5.083, 0.5),
    (448.001085, 10.41, 1.405, 25.64, 0.66, 5.028, 0.67),
    (470.888999, 0.3254, 3.597, 21.34, 0.66, 4.506, 0.65),
    (474.689092, 1.26, 2.379, 23.2, 0.65, 4.804, 0.64),
    (488.490108, 0.2529, 2.852, 25.86, 0.69, 5.201, 0.72),
    (503.568532, 0.0372, 6.731, 16.12, 0.61, 3.98, 0.43),
    (504.482692, 0.0124, 6.731, 16.12, 0.61, 4.01, 0.45),
    (547.67644, 0.9785, 0.158, 26.0, 0.7, 4.5, 1.0),
    (552.02096, 0.184, 0.158, 26.0, 0.7, 4.5, 1.0),
    (556.935985, 497.0, 0.159, 30.86, 0.69, 4.552, 1.0),
    (620.700807, 5.015, 2.391, 24.38, 0.71, 4.856, 0.68),
    (645.766085, 0.0067, 8.633, 18.0, 0.6, 4.0, 0.5),
    (658.00528, 0.2732, 7.816, 32.1, 0.69, 4.14, 1.0),
    (752.033113, 243.4, 0.396, 30.86, 0.68, 4.352, 0.84),
    (841.051732, 0.0134, 8.177, 15.9, 0.33, 5.76, 0.45),
    (859.965698, 0.1325, 8.055, 30.6, 0.68, 4.09, 0.84),
    (899.303175, 0.0547, 7.914, 29.85, 0.68, 4.53, 0.9),
    (902.611085, 0.0386, 8.429, 28.65, 0.7, 5.1, 0.95),
    (906.205957, 0.1836, 5.11, 24.08, 0.7, 4.7, 0.53),
    (916.171582, 8.4, 1.441, 26.73, 0.7, 5.15, 0.78),
    (923.112692, 0.0079, 10.293, 29.0, 0.7, 5.0, 0.8),
    (970.315022, 9.009, 1.919, 25.5, 0.64, 4.94, 0.67),
    (987.926764, 134.6, 0.257, 29.85, 0.68, 4.55, 0.9),
]


def _record(mol, iso, f0_ghz, strength, gamma_air, gamma_self, n_air):
    nu = f0_ghz / GHZ_PER_WAVENUMBER
    rec = f"{mol:2d}{iso:1d}{nu:12.6f}{strength:10.3E}{0.0:10.3E}"
    rec += f"{gamma_air:6.4f}"[1:]          # F5.4, leading zero dropped
    rec += f"{gamma_self:5.3f}"
    rec += f"{0.0:10.4f}"
    rec += f"{n_air:4.2f}"
    rec += f"{0.0:8.6f}"
    rec += " " * 60 + "000000" + " " * 12 + " " + f"{0.0:7.1f}" * 2
    assert len(rec) == 160, len(rec)
    return rec


def _to_hitran_strength(f0_ghz, s_hz_per_molecule_density):
    return 4 * math.pi ** 2 * f0_ghz * 1e9 * s_hz_per_molecule_density / (C ** 2 * 1e-2)


def water_records():
    theta = 300.0 / T_REF
    out = []
    for f0, b1, b2, b3, b4, b5, _b6 in WATER:
        # S_ITU [kHz] = b1 * 0.1 * e * theta^3.5 * exp(b2 (1 - theta)), e in hPa
        s_hz_per_hpa = b1 * 0.1 * theta ** 3.5 * math.exp(b2 * (1 - theta)) * 1e3
        n_per_hpa = 100.0 / (K_B * T_REF)
        strength = _to_hitran_strength(f0, s_hz_per_hpa / n_per_hpa)
        gamma_air = b3 * 1e-4 * HPA_PER_ATM / GHZ_PER_WAVENUMBER
        out.append(_record(1, 1, f0, strength, gamma_air, gamma_air * b5, b4))
    return out


def oxygen_records():
    theta = 300.0 / T_REF
    out = []
    for f0, a1, a2, a3 in OXYGEN:
        # S_ITU [kHz] = a1 * 1e-7 * p * theta^3 * exp(a2 (1 - theta)), p dry in hPa
        s_hz_per_hpa = a1 * 1e-7 * theta ** 3 * math.exp(a2 * (1 - theta)) * 1e3
        n_per_hpa = O2_FRACTION * 100.0 / (K_B * T_REF)
        strength = _to_hitran_strength(f0, s_hz_per_hpa / n_per_hpa)
        gamma_air = a3 * 1e-4 * HPA_PER_ATM / GHZ_PER_WAVENUMBER
        out.append(_record(7, 1, f0, strength, gamma_air, gamma_air, 0.8))
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    default = Path(__file__).resolve().parents[1] / "src" / "linklab" / "data"
    outdir = Path(argv[0]) if argv else default
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "h2o.par").write_text("\n".join(water_records()) + "\n")
    (outdir / "o2.par").write_text("\n".join(oxygen_records()) + "\n")
    print(f"wrote {len(WATER)} H2O and {len(OXYGEN)} O2 lines to {outdir}")


if __name__ == "__main__":
    main()
