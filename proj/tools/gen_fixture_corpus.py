#!/usr/bin/env python3
"""Generate the bundled synthetic corpus under data/fixtures.

The matches follow the Cricsheet JSON layout closely enough for the reader
(info.match_type, info.dates, info.teams, info.venue, info.event,
innings[*].overs[*].deliveries[*]). Scoring is drawn from a simple
phase- and wicket-dependent model with a fixed seed, so regenerating is
byte-stable.

    python3 tools/gen_fixture_corpus.py data/fixtures
"""

import json
import random
import sys
from pathlib import Path

TEAMS = ["Avon", "Brent", "Colne", "Derwent", "Exe", "Fal", "Garry", "Humber"]
VENUES = ["Riverside Ground", "North Park", "Harbour Oval", "Hill Top"]

RUN_VALUES = [0, 1, 2, 3, 4, 6]


def ball_runs(rng, progress, wickets, t20):
    # Scoring accelerates late in the innings and slows with wickets down.
    base = (1.05 if t20 else 0.72) + (0.55 if t20 else 0.75) * progress ** 2
    base *= max(0.35, 1.0 - 0.06 * wickets)
    weights = [
        max(0.05, 0.52 - 0.35 * base),
        0.30,
        0.06 + 0.03 * base,
        0.01,
        0.07 * base,
        0.025 * base ** 1.5,
    ]
    return rng.choices(RUN_VALUES, weights)[0]


def innings(rng, team, balls, t20, target=None):
    overs = []
    total, wickets, legal = 0, 0, 0
    wicket_p = 0.043 if t20 else 0.026
    for over in range(balls // 6):
        deliveries = []
        legal_in_over = 0
        while legal_in_over < 6:
            d = {"batter": f"{team} {wickets + 1}", "bowler": "bowler",
                 "non_striker": f"{team} {wickets + 2}"}
            r = rng.random()
            extras = {}
            if r < 0.028:
                extras = {"wides": 1 + (1 if rng.random() < 0.1 else 0)}
                batter = 0
            elif r < 0.034:
                extras = {"noballs": 1}
                batter = ball_runs(rng, legal / balls, wickets, t20)
            else:
                batter = ball_runs(rng, legal / balls, wickets, t20)
                if r < 0.050 and batter in (1, 2, 4):
                    extras = {"legbyes" if r < 0.044 else "byes": batter}
                    batter = 0
            extra_runs = sum(extras.values())
            d["runs"] = {"batter": batter, "extras": extra_runs, "total": batter + extra_runs}
            if extras:
                d["extras"] = extras
            is_legal = "wides" not in extras and "noballs" not in extras
            if is_legal:
                legal_in_over += 1
                legal += 1
                if rng.random() < wicket_p * (1.0 + 0.8 * legal / balls):
                    d["wickets"] = [{"player_out": d["batter"], "kind": rng.choice(["caught", "bowled", "lbw"])}]
                    wickets += 1
            deliveries.append(d)
            total += batter + extra_runs
            if wickets == 10 or (target is not None and total >= target):
                break
        overs.append({"over": over, "deliveries": deliveries})
        if wickets == 10 or (target is not None and total >= target):
            break
    return {"team": team, "overs": overs}, total


def match(rng, kind, index):
    t20 = kind != "ODI"
    balls = 120 if t20 else 300
    home, away = rng.sample(TEAMS, 2)
    year = 2008 + index % 10
    info = {
        "dates": [f"{year}-{1 + index % 12:02d}-{1 + index % 27:02d}"],
        "match_type": "ODI" if kind == "ODI" else "T20",
        "overs": 20 if t20 else 50,
        "teams": [home, away],
        "venue": VENUES[index % len(VENUES)],
        "team_type": "club" if kind == "IPL" else "international",
    }
    if kind == "IPL":
        info["event"] = {"name": "Indian Premier League"}
    first, total = innings(rng, home, balls, t20)
    second, _ = innings(rng, away, balls, t20, target=total + 1)
    doc = {"meta": {"data_version": "1.1.0"}, "info": info, "innings": [first, second]}
    # A few rain-affected results and one tied IPL game settled by a super over.
    if index % 11 == 5:
        info["outcome"] = {"method": "D/L"}
    if kind == "IPL" and index == 7:
        so, _ = innings(random.Random(99), home, 6, True)
        so["super_over"] = True
        doc["innings"].append(so)
    return doc


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data/fixtures")
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20180101)
    prefixes = {"ODI": "odi", "T20I": "t20i", "IPL": "ipl"}
    for kind in ("ODI", "T20I", "IPL"):
        for i in range(24):
            doc = match(rng, kind, i)
            path = out / f"{prefixes[kind]}_{i:03d}.json"
            path.write_text(json.dumps(doc, separators=(",", ":")) + "\n")


if __name__ == "__main__":
    main()
