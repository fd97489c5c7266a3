"""Generate the bundled two-node toy power system time series.

Hour 0 is a Monday in early spring. Values are synthetic: daily and weekly
load cycles, a seasonal solar envelope with cloudy days, and AR(1) wind.
"""
import math
import os
import sys

import numpy as np

HOURS = 8760
START_DAY = 90  # day of year of hour 0


def solar(rng):
    out = np.zeros(HOURS)
    cloud = 1.0
    for d in range(HOURS // 24):
        doy = (START_DAY + d) % 365
        season = 0.55 + 0.45 * math.cos(2 * math.pi * (doy - 172) / 365)
        daylen = 12 + 4 * math.cos(2 * math.pi * (doy - 172) / 365)
        cloud = 0.6 * cloud + 0.4 * rng.uniform(0.25, 1.0)
        for h in range(24):
            x = (h + 0.5 - (12.5 - daylen / 2)) / daylen
            if 0 < x < 1:
                out[d * 24 + h] = 0.85 * season * cloud * math.sin(math.pi * x) ** 1.5
    return out


def wind(rng, mean, rho=0.97):
    z = np.zeros(HOURS)
    for t in range(1, HOURS):
        z[t] = rho * z[t - 1] + math.sqrt(1 - rho ** 2) * rng.normal()
    doy = (START_DAY + np.arange(HOURS) / 24) % 365
    season = 1 + 0.3 * np.cos(2 * np.pi * (doy - 15) / 365)
    v = np.clip(mean * season * np.exp(0.75 * z - 0.28), 0, None)
    return np.clip(v / (1 + 0.6 * v), 0, 1)


def load(rng, base):
    h = np.arange(HOURS)
    hod = h % 24
    dow = (h // 24) % 7
    doy = (START_DAY + h / 24) % 365
    daily = 1 + 0.18 * np.sin(2 * np.pi * (hod - 7) / 24) - 0.06 * np.cos(4 * np.pi * (hod - 2) / 24)
    weekly = np.where(dow == 5, 0.9, np.where(dow == 6, 0.83, 1.0))
    season = 1 + 0.1 * np.cos(2 * np.pi * (doy - 15) / 365)
    noise = 1 + 0.015 * rng.normal(size=HOURS)
    return base * daily * weekly * season * noise


def write(path, header, values, digits):
    with open(path, "w") as f:
        f.write(header + "\n")
        for v in values:
            f.write(f"{round(float(v), digits):g}\n".replace("e+", "e"))


def main(out_dir):
    rng = np.random.default_rng(2030)
    os.makedirs(out_dir, exist_ok=True)
    pv = solar(rng)
    on = wind(rng, 0.32)
    off = wind(rng, 0.62, rho=0.98)
    ror = np.clip(0.55 + 0.1 * np.sin(2 * np.pi * ((START_DAY + np.arange(HOURS) / 24) % 365 - 120) / 365), 0, 1)
    write(os.path.join(out_dir, "solar.csv"), "solar", pv, 4)
    write(os.path.join(out_dir, "wind_onshore.csv"), "wind_onshore", on, 4)
    write(os.path.join(out_dir, "wind_offshore.csv"), "wind_offshore", off, 4)
    write(os.path.join(out_dir, "run_of_river.csv"), "run_of_river", ror, 4)
    write(os.path.join(out_dir, "load_de.csv"), "load_de", load(rng, 62000.0), 0)
    write(os.path.join(out_dir, "load_nb.csv"), "load_nb", load(rng, 45000.0), 0)
    print("mean cf solar %.3f onshore %.3f offshore %.3f" % (pv.mean(), on.mean(), off.mean()))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "toy")
