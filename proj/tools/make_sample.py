#!/usr/bin/env python3
"""Writes the bundled 200-row incident sample (deterministic)."""
import csv
import random
import sys

REGIONS = {
    "Central America & Caribbean": ((7, 24, -93, -59), ["Guatemala", "El Salvador", "Nicaragua"]),
    "Central Asia": ((35, 56, 46, 88), ["Tajikistan", "Kyrgyzstan"]),
    "East Asia": ((18, 54, 73, 146), ["China", "Japan"]),
    "Eastern Europe": ((41, 70, 14, 60), ["Ukraine", "Russia"]),
    "Middle East & North Africa": ((12, 42, -18, 63), ["Iraq", "Yemen, Rep.", "Egypt", "Algeria"]),
    "North America": ((14, 72, -170, -52), ["United States", "Mexico"]),
    "Australasia & Oceania": ((-48, 0, 110, 180), ["Australia"]),
    "South America": ((-56, 13, -82, -34), ["Colombia", "Peru"]),
    "Southeast Asia": ((-11, 29, 92, 141), ["Philippines", "Thailand"]),
    "Sub-Saharan Africa": ((-35, 18, -18, 52), ["Nigeria", "Somalia"]),
    "South Asia": ((5, 38, 60, 98), ["India", "Pakistan", "Afghanistan"]),
    "Western Europe": ((35, 72, -25, 32), ["United Kingdom", "Spain"]),
}
REGION_WEIGHTS = [8, 2, 3, 4, 30, 5, 2, 10, 8, 10, 13, 5]
WEAPONS = ["Explosives", "Firearms", "Incendiary", "Melee", "Unknown", "Vehicle (not to include vehicle-borne explosives, i.e., car or truck bombs)", "Chemical"]
TARGETS = ["Military", "Police", "Private Citizens & Property", "Government (General)", "Business", "Religious Figures/Institutions"]
ATTACKS = ["Bombing/Explosion", "Armed Assault", "Assassination", "Hostage Taking (Kidnapping)", "Facility/Infrastructure Attack", "Unknown", "Hijacking"]
SOURCES = ["PGIS", "CETIS", "ISVG", "START Primary Collection", "UMD Schmid 2012"]
PROPERTY = ["Minor (likely < $1 million)", "Major (likely >= $1 million but < $1 billion)", "Unknown", ""]
CLASSES = ["Claimed", "Not-Claimed", "Anonymous"]


def main(path):
    rng = random.Random(20151231)
    names = list(REGIONS)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["eventid", "iyear", "imonth", "country_txt", "region_txt", "weaptype1_txt",
                    "targtype1_txt", "attacktype1_txt", "dbsource", "propextent_txt",
                    "latitude", "longitude", "claim_status"])
        for i in range(200):
            region = rng.choices(names, REGION_WEIGHTS)[0]
            (lat0, lat1, lon0, lon1), countries = REGIONS[region]
            label = rng.choices(CLASSES, [9, 48, 43])[0]
            if label == "Claimed":
                attack = rng.choice(ATTACKS[:3])
                weapon = rng.choice(WEAPONS[:2])
            elif label == "Not-Claimed":
                attack = rng.choice(ATTACKS)
                weapon = rng.choice(WEAPONS)
            else:
                attack = rng.choice(ATTACKS[:2] + ATTACKS[5:6])
                weapon = rng.choice(WEAPONS[:2] + WEAPONS[4:5])
            year = rng.randint(1970, 2015)
            month = rng.randint(0, 12)
            if rng.random() < 0.05:
                lat = lon = ""
            else:
                lat = f"{rng.uniform(lat0 + 0.5, lat1 - 0.5):.6f}"
                lon = f"{rng.uniform(lon0 + 0.5, lon1 - 0.5):.6f}"
            w.writerow([f"{year}{month:02d}{i:04d}", year, month, rng.choice(countries), region,
                        weapon, rng.choice(TARGETS), attack, rng.choice(SOURCES),
                        rng.choice(PROPERTY), lat, lon, label])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sample.csv")
