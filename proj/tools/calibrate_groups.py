#!/usr/bin/env python3
"""Calibrates the group-rule thresholds against the named memberships.

Budgets come from two sources: recomputed from data/ and read from the
printed endpoint columns in fixtures/. A threshold pair is accepted when
both sources reproduce every named membership.

usage: tools/calibrate_groups.py [--root DIR]
"""
import argparse
import csv
import itertools
from pathlib import Path

CB = 60069.94
NAMED = {
    "2016-2019": {"DE": "G1", "FR": "G1", "IT": "G1", "ES": "G1",
                  "CY": "G3", "MT": "G3", "DK": "G3", "NL": "G3"},
    "2019": {"FI": "G3", "MT": "G4", "SE": "G4"},
}


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def series(path):
    out = {}
    for r in rows(path):
        out.setdefault(r["country_code"], {})[int(r["year"])] = float(r["value"])
    return out


def sweep(path):
    return {r["country_code"]: [float(r[k]) for k in r if k.startswith("w")] for r in rows(path)}


def from_data(root, study):
    gdp = series(root / "data/gdp_per_capita.csv")
    ghg = series(root / "data/ghg_total.csv")
    over = {}
    for r in rows(root / "data/tapio_overrides.csv"):
        over.setdefault(r["country_code"], {})[r["window"]] = float(r["value"])
    members = [c for c in gdp if c != "EU27"]
    years = range(2016, 2020) if study == "2016-2019" else [2019]
    g = {c: sum(gdp[c][y] for y in years) / len(years) for c in gdp}
    ratio = {c: g["EU27"] / g[c] for c in members}
    cap = {c: CB * ratio[c] / sum(ratio.values()) for c in members}
    ine = {c: CB * ghg[c][2019] / ghg["EU27"][2019] for c in members}
    if study == "2016-2019":
        tap = {c: o.get("AVG", (o["W3"] + o["W2"] + o["W1"]) / 3) for c, o in over.items()}
    else:
        tap = {c: o["W1"] for c, o in over.items()}
    shift = max(tap[c] for c in members) + 1
    inv = {c: (tap["EU27"] - shift) / (tap[c] - shift) for c in members}
    dec = {c: CB * inv[c] / sum(inv.values()) for c in members}
    return cap, dec, ine


def from_fixtures(root, study):
    if study == "2016-2019":
        cd, ci = sweep(root / "fixtures/table_3.csv"), sweep(root / "fixtures/table_a12.csv")
    else:
        cd, ci = sweep(root / "fixtures/table_a11.csv"), sweep(root / "fixtures/table_a13.csv")
    return ({c: v[0] for c, v in ci.items()}, {c: v[-1] for c, v in cd.items()}, {c: v[-1] for c, v in ci.items()})


def classify(cap, dec, ine, chord, band):
    out = {}
    for c in cap:
        trace = [(1 - t) * (t * dec[c] + (1 - t) * cap[c]) + t * ine[c] for t in (k / 10 for k in range(11))]
        lo, hi = min(cap[c], ine[c]), max(cap[c], ine[c])
        span = abs(ine[c] - cap[c])
        rd = (dec[c] - cap[c]) / (4 * span) if span else float("inf")
        if any(v > hi + band or v < lo - band for v in trace):
            out[c] = "G4"
        elif abs(rd) < chord:
            out[c] = "G1"
        elif dec[c] < cap[c]:
            out[c] = "G2"
        else:
            out[c] = "G3"
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--root", type=Path, default=Path(__file__).resolve().parent.parent)
    args = ap.parse_args()

    inputs = {(s, src): fn(args.root, s) for s in NAMED for src, fn in (("data", from_data), ("fixtures", from_fixtures))}
    chords = [k / 1000 for k in range(5, 201, 5)]
    bands = [0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 5.0]
    ok = []
    for chord, band in itertools.product(chords, bands):
        if all(classify(*inputs[key], chord, band).get(c) == g for key in inputs for c, g in NAMED[key[0]].items()):
            ok.append((chord, band))
    if not ok:
        print("no threshold pair reproduces the named memberships")
        return 1
    print("accepted chord thresholds:", min(c for c, _ in ok), "to", max(c for c, _ in ok))
    print("accepted band tolerances:", sorted({b for _, b in ok}))
    chord, band = 0.05, 0.5
    print(f"defaults: chord_deviation={chord} band_tolerance_mt={band} accepted={(chord, band) in ok}")
    for key, (cap, dec, ine) in sorted(inputs.items()):
        groups = classify(cap, dec, ine, chord, band)
        print(f"{key[0]} ({key[1]}):")
        for g in ("G1", "G2", "G3", "G4"):
            print(f"  {g}: {' '.join(c for c in cap if groups[c] == g)}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
