"""Exhaustive scan versus GA search for closer-window selection.

Both engines feed the same transform/threshold pipeline; the interesting
question is how much selection quality the GA gives up in exchange for
evaluating fewer window-pair distances. Run this to see PSNR and
evaluation counts side by side over a small sigma sweep.
"""

import time

from mwdenoise import (DenoiseConfig, add_awgn, ct_phantom, denoise_image,
                       psnr)

clean = ct_phantom(128)

print(f"{'sigma':>6} {'engine':<12} {'psnr_noisy':>10} {'psnr_out':>9} "
      f"{'evals':>9} {'secs':>6}")
for sigma in (10.0, 20.0, 30.0):
    noisy = add_awgn(clean, sigma, seed=0)
    p_noisy = psnr(clean, noisy)
    for engine in ("exhaustive", "ga"):
        cfg = DenoiseConfig(m=8, s_size=4, engine=engine, sigma=sigma,
                            threshold_scale=0.25, seed=0)
        t0 = time.perf_counter()
        out, stats = denoise_image(noisy, cfg)
        dt = time.perf_counter() - t0
        print(f"{sigma:>6g} {engine:<12} {p_noisy:>10.2f} "
              f"{psnr(clean, out):>9.2f} {stats.distance_evals:>9} "
              f"{dt:>6.1f}")
