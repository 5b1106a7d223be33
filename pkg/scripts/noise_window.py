"""Sweep the damping of source 1 in the bundled amplitude-damping instance and
print the range where filtering reveals a violation that B alone misses."""
import argparse

from starnet.reproduce import load_instance
from starnet.scan import run_scan, scan_csv, violation_window


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="also write the full CSV here")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    cfg = load_instance("damping-window")
    rows = run_scan(cfg, args.workers)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(scan_csv(cfg, rows))
    for key in ("violation", "hidden"):
        window = violation_window(rows, key=key)
        print(f"{key:<9}", "none" if window is None else "%.3f .. %.3f" % window)


if __name__ == "__main__":
    main()
