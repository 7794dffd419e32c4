#!/usr/bin/env python3
"""Writes the synthetic market fixtures under data/fixtures.

Prices are a seeded random walk, not real market history. Re-running with the
same seed gives byte-identical files.
"""
import argparse
import datetime as dt
import json
import math
import pathlib
import random

COMPANIES = [
    # ticker, name, start price, drift, vol, ceo, hq, sector, dividend (None = not reported), cap
    ("AAPL", "Apple Inc.", 172.0, 0.0006, 0.016, "Tim Cook", "Cupertino, California",
     "Technology", 0.96, 2.7e12),
    ("AMZN", "Amazon.com, Inc.", 128.0, 0.0004, 0.020, "Andy Jassy", "Seattle, Washington",
     "Consumer Discretionary", 0.0, 1.4e12),
    ("GOOGL", "Alphabet Inc.", 131.0, 0.0005, 0.018, "Sundar Pichai",
     "Mountain View, California", "Communication Services", 0.80, 1.7e12),
    ("AMD", "Advanced Micro Devices, Inc.", 104.0, 0.0007, 0.028, "Lisa Su",
     "Santa Clara, California", "Technology", None, 1.7e11),
    ("FB", "Facebook, Inc.", 296.0, -0.0002, 0.022, "Mark Zuckerberg",
     "Menlo Park, California", "Communication Services", None, 7.6e11),
    ("MSFT", "Microsoft Corporation", 318.0, 0.0003, 0.014, "Satya Nadella",
     "Redmond, Washington", "Technology", 2.72, 2.4e12),
    ("TSLA", "Tesla, Inc.", 251.0, -0.0008, 0.032, "Elon Musk", "Austin, Texas",
     "Consumer Discretionary", None, 8.0e11),
    ("NVDA", "NVIDIA Corporation", 43.0, 0.0015, 0.030, "Jensen Huang",
     "Santa Clara, California", "Technology", 0.04, 1.1e12),
]

DESCRIPTIONS = {
    "AAPL": "Designs consumer electronics, software and online services.",
    "AMZN": "Runs an online marketplace, logistics network and cloud computing business.",
    "GOOGL": "Holding company for Google search, advertising, YouTube and cloud services.",
    "AMD": "Designs processors and graphics chips for computers, consoles and data centres.",
    "FB": "Operates social networks and messaging apps funded by advertising.",
    "MSFT": "Sells operating systems, productivity software and cloud services.",
    "TSLA": "Builds electric vehicles, batteries and solar products.",
    "NVDA": "Designs graphics processors and accelerators for gaming and AI.",
}

HEADLINES = [
    "{name} shares move after quarterly results",
    "Analysts revisit price targets for {name}",
    "{name} announces new product line",
    "What the latest filing says about {name}",
    "{name} expands into new markets",
    "Investors weigh {name} outlook ahead of earnings",
]
SOURCES = ["Market Wire", "Daily Ledger", "Tech Street", "Finance Desk"]


def trading_days(end, count):
    days = []
    d = end
    while len(days) < count:
        if d.weekday() < 5:
            days.append(d)
        d -= dt.timedelta(days=1)
    return list(reversed(days))


def candles(rng, start, drift, vol, days):
    rows = []
    close = start
    for day in days:
        open_ = close * math.exp(rng.gauss(0, vol / 3))
        close = open_ * math.exp(drift + rng.gauss(0, vol))
        high = max(open_, close) * (1 + abs(rng.gauss(0, vol / 2)))
        low = min(open_, close) * (1 - abs(rng.gauss(0, vol / 2)))
        volume = int(rng.uniform(5e6, 6e7))
        rows.append((day.isoformat(), round(open_, 2), round(high, 2), round(low, 2),
                     round(close, 2), volume))
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default=str(pathlib.Path(__file__).parent.parent / "data" / "fixtures"))
    parser.add_argument("--seed", type=int, default=20201)
    parser.add_argument("--bars", type=int, default=250)
    parser.add_argument("--end", default="2026-09-30")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    out = pathlib.Path(args.out)
    (out / "candles").mkdir(parents=True, exist_ok=True)
    days = trading_days(dt.date.fromisoformat(args.end), args.bars)

    profiles = []
    news = []
    for ticker, name, start, drift, vol, ceo, hq, sector, dividend, cap in COMPANIES:
        rows = candles(rng, start, drift, vol, days)
        with open(out / "candles" / f"{ticker}.csv", "w", newline="\n") as f:
            f.write("date,open,high,low,close,volume\n")
            for r in rows:
                f.write(f"{r[0]},{r[1]:.2f},{r[2]:.2f},{r[3]:.2f},{r[4]:.2f},{r[5]}\n")
        profile = {"ticker": ticker, "name": name, "ceo": ceo, "headquarters": hq,
                   "sector": sector, "description": DESCRIPTIONS[ticker], "marketCap": cap}
        if dividend is not None:
            profile["annualDividend"] = dividend
        profiles.append(profile)

        short = name.split(",")[0].replace(" Inc.", "").replace(" Corporation", "")
        for i, headline in enumerate(rng.sample(HEADLINES, 4)):
            day = days[-1 - i * 3]
            hour = rng.randrange(8, 20)
            news.append({
                "ticker": ticker,
                "headline": headline.format(name=short),
                "source": rng.choice(SOURCES),
                "url": f"https://news.example.com/{ticker.lower()}/{day.isoformat()}-{i}",
                "summary": f"Synthetic fixture story about {short}.",
                "publishedAt": f"{day.isoformat()}T{hour:02d}:00:00Z",
            })

    with open(out / "profiles.json", "w") as f:
        json.dump(profiles, f, indent=2)
        f.write("\n")
    with open(out / "news.json", "w") as f:
        json.dump(news, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
