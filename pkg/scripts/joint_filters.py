"""Optimize the three joint-filter instances and print B, S* and success."""
import argparse
import dataclasses

from starnet.config import build_scenario
from starnet.network import bound_closed, bound_xy, scenario_success
from starnet.optimize import maximize_s
from starnet.reproduce import load_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--restarts", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    print(f"{'instance':<12} {'B':>9} {'B_xy':>9} {'S*':>9} {'success':>8}  restart")
    for name in ("joint-pure", "joint-werner", "joint-g"):
        cfg = load_instance(name)
        over = {k: v for k, v in (("restarts", args.restarts), ("seed", args.seed)) if v is not None}
        opt = dataclasses.replace(cfg.optimizer, workers=args.workers, **over)
        sc = build_scenario(cfg)
        _, rep = maximize_s(sc, opt)
        print(f"{name:<12} {bound_closed(sc):9.6f} {bound_xy(sc):9.6f} {rep.S:9.6f} "
              f"{scenario_success(sc):8.4f}  {rep.extra['restart']}/{opt.restarts}")


if __name__ == "__main__":
    main()
