"""Write one of the bundled 3-D state-parameter sweeps to CSV and summarize
the hidden region."""
import argparse

from starnet.reproduce import load_instance
from starnet.scan import run_scan, scan_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("instance", choices=("region-horodecki", "region-bd"))
    ap.add_argument("--out", help="CSV path (default <instance>.csv)")
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    cfg = load_instance(args.instance)
    rows = run_scan(cfg, args.workers)
    out = args.out or f"{args.instance}.csv"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(scan_csv(cfg, rows))
    hidden = [r["success"] for _, r in rows if r["hidden"]]
    print(f"{len(rows)} points, {len(hidden)} hidden", end="")
    print(f", success {min(hidden):.4f} .. {max(hidden):.4f}" if hidden else "")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
