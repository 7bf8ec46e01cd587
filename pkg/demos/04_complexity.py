"""Iterations and flops per decode as the number of antennas grows.

Run: python3 demos/04_complexity.py
"""
from alrmimo.sim import ExperimentConfig, run_complexity_sweep

cfg = ExperimentConfig(mode="complexity", q=16,
                       decoders=("lll-zf", "lll-sic", "kim-park", "alr-v2",
                                 "calr-v2"),
                       antennas=(2, 3, 4, 5, 6, 7, 8), snr_db=(12.0,),
                       trials=1000, seed=4)
recs = run_complexity_sweep(cfg)
at = {r.decoder: r for r in recs}

print(" n   K(LLL)  K(ALR)  ratio   flops: LLL-ZF  LLL-SIC  Kim-Park"
      "     ALR  complex ALR")
for n in cfg.antennas:
    g = lambda d: at[f"{d}@{n}x{n}"]
    k0 = g("lll-sic").mean_lll_iterations
    k1 = g("alr-v2").mean_lll_iterations
    print("%2d %8.1f %7.1f %6.2f %14.0f %8.0f %9.0f %7.0f %12.0f"
          % (n, k0, k1, k1 / k0, g("lll-zf").mean_flops,
             g("lll-sic").mean_flops, g("kim-park").mean_flops,
             g("alr-v2").mean_flops, g("calr-v2").mean_flops))

viol = sum(r.extras["k_bound_violations"] for r in recs
           if r.decoder.startswith("lll-sic"))
print("\nplain reductions over the worst-case iteration bound:", viol)
# ALR needs about twice the LLL iterations of plain reduction but skips
# the QR and back substitution of SIC, so its total flops stay comparable.
