"""Build and check the lower-bound witnesses; optionally confirm Unknown held-out points.

    python3 scripts/witness_certificates.py --sizes 10 50 100 --unknown 20
"""
import argparse
import time

from cqlearn.instances import gen_lb_margin, gen_lb_r3, verify_witness, witness_unknowns


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 50, 100])
    ap.add_argument("--unknown", type=int, default=20, help="size for the inference check (0 skips)")
    args = ap.parse_args()

    for n in args.sizes:
        for make in (gen_lb_r3, gen_lb_margin):
            t0 = time.perf_counter()
            w = make(n)
            rep = verify_witness(w)
            bits = max(abs(int(c)).bit_length() for con in w.concepts for c in con.w)
            print(f"{w.kind:>15} n={n:<4} M={w.M} max_weight_bits={bits:<5} "
                  f"{'clean' if rep.clean else f'{len(rep.violations)} violations'}"
                  f" ({time.perf_counter() - t0:.2f}s)")
            if rep.min_margin_sq is not None:
                print(f"{'':>15} min squared margin {float(rep.min_margin_sq):.5f}")
    if args.unknown:
        for make in (gen_lb_r3, gen_lb_margin):
            flags = witness_unknowns(make(args.unknown))
            print(f"n={args.unknown} {make.__name__}: {sum(flags)}/{len(flags)} held-out points Unknown")


if __name__ == "__main__":
    main()
