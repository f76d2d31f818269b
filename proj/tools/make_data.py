"""Regenerates the bundled model documents and the synthetic gold table in data/."""

import json
import math
import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

COUPLING = {"g": {"kind": "constant", "value": 1.0}, "system_dim": 3, "bath_dim": 3}

MODELS = {
    "gold_2peak": ("gold phonon DOS, two-peak Lorentzian fit",
                   [(2.11, 1.3, 1.0), (4.05, 0.56, 0.15)]),
    "iron_1peak": ("iron phonon DOS, single-peak Lorentzian fit", [(6.27, 3.71, 1.0)]),
    "iron_3peak": ("iron phonon DOS, three-peak Lorentzian fit",
                   [(5.23, 2.04, 1.0), (6.77, 1.74, 0.50), (8.45, 0.71, 0.62)]),
    "iron_5peak": ("iron phonon DOS (theory), five-peak Lorentzian fit",
                   [(4.67, 1.87, 1.0), (5.46, 0.74, 0.34), (6.63, 1.41, 1.20), (8.03, 0.78, 0.27),
                    (8.49, 0.44, 0.68)]),
    "yig_1peak": ("YIG phonon DOS, single-peak Lorentzian fit (overdamped)", [(5.91, 12.4, 1.0)]),
    "yig_18peak": ("YIG phonon DOS, eighteen-peak Lorentzian fit",
                   [(2.56, 0.99, 1.00), (3.66, 1.35, 16.20), (4.89, 1.22, 10.10), (6.45, 0.55, 1.47),
                    (7.16, 0.99, 7.75), (8.10, 1.20, 10.60), (9.20, 1.18, 11.50), (10.20, 0.54, 1.70),
                    (10.80, 1.82, 11.30), (12.60, 1.67, 33.20), (13.70, 0.83, 9.07), (13.80, 3.80, -86.60),
                    (14.40, 1.30, 19.60), (16.10, 1.07, -13.70), (16.40, 1.83, 40.10), (18.70, 1.46, 6.08),
                    (20.10, 0.94, 4.27), (20.90, 0.45, 2.20)]),
}

THZ_PER_MEV = 0.24179892420849183


def write(name, doc):
    (DATA / f"{name}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def lorentzian(peaks, nu):
    w = 2 * math.pi * nu
    total = 0.0
    for nu0, gam, ratio in peaks:
        w0, g = 2 * math.pi * nu0, 2 * math.pi * gam
        total += ratio * g * w * w / ((w0 * w0 - w * w) ** 2 + g * g * w * w)
    return total


def main():
    for name, (prov, peaks) in MODELS.items():
        write(name, {
            "schema_version": "1", "kind": "lorentzian_sum", "provenance": prov, "coupling": COUPLING,
            "lorentzian": {"first_weight": 1.0,
                           "peaks": [{"nu0_thz": a, "gamma_thz": b, "ratio": r} for a, b, r in peaks]},
        })
    # Sound speed from the cutoff and the atomic density of gold (59 nm^-3).
    k_debye = (6 * math.pi ** 2 * 59.0) ** (1 / 3)
    write("gold_debye", {
        "schema_version": "1", "kind": "debye", "provenance": "gold, Debye model", "coupling": COUPLING,
        "debye": {"sound_speed_km_s": round(2 * math.pi * 3.54 / k_debye, 3), "cutoff_thz": 3.54,
                  "dimension": 3},
    })

    gold = MODELS["gold_2peak"][1]
    lines = ["energy_mev,dos"]
    n = 240
    for i in range(n):
        mev = 0.25 + i * (33.0 - 0.25) / (n - 1)
        lines.append(f"{mev!r},{lorentzian(gold, mev * THZ_PER_MEV):.9e}")
    (DATA / "gold_dos_synthetic.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
