"""SER against SNR for a 4x4 16-QAM system, paired across decoders.

The same channels, symbols and unit noise are used by every decoder, so
small differences between curves are measured directly. Writes
ser_4x4.csv next to the working directory.

Run: python3 demos/03_ser_sweep.py   (about a minute)
"""
from alrmimo.sim import (ExperimentConfig, emit_results, run_ser_sweep,
                         snr_at_ser)

cfg = ExperimentConfig(M=4, N=4, q=16,
                       decoders=("ml", "alr-v2", "alr-v2+mmse", "lll-sic",
                                 "lll-zf", "kim-park"),
                       snr_db=(10.0, 13.0, 16.0, 19.0, 22.0, 25.0, 28.0, 31.0),
                       trials=20_000, min_errors=300, seed=3)
recs = run_ser_sweep(cfg)

print("%-12s" % "SNR dB" + "".join("%12s" % d for d in cfg.decoders))
for snr in cfg.snr_db:
    row = {r.decoder: r for r in recs if r.snr_db == snr}
    print("%-12g" % snr + "".join("%12.3g" % row[d].ser for d in cfg.decoders))

# 95% Wilson intervals at the highest SNR
print()
for r in recs:
    if r.snr_db == cfg.snr_db[-1]:
        lo, hi = r.wilson()
        print("%-12s SER %.2e  [%.2e, %.2e]  over %d trials"
              % (r.decoder, r.ser, lo, hi, r.trials))

target = 1e-3
print("\nSNR needed for SER = %g" % target)
ref = snr_at_ser(recs, "ml", target)
for d in cfg.decoders:
    try:
        s = snr_at_ser(recs, d, target)
        print("%-12s %.2f dB  (%+.2f dB from ML)" % (d, s, s - ref))
    except ValueError as e:
        print(e)

emit_results(recs, "ser_4x4.csv")
print("\nwrote ser_4x4.csv")
