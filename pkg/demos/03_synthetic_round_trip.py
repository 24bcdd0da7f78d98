"""
Synthetic haze, dehazing and PSNR/SSIM
======================================

Adds haze to the 256x256 scene with a depth ramp, dehazes it with the full
pipeline (estimated airlight and transmission) and compares quality
against the clean image.  Also shows the exact inversion when the true
transmission is supplied.
"""
import numpy as np

from vardehaze import dehaze, fixtures, psnr, recover, ssim

clean, hazy, t_true, A = fixtures.hazy_pair(256)

result = dehaze(hazy)
print("hazy    PSNR %.2f dB  SSIM %.4f" % (psnr(hazy, clean), ssim(hazy, clean)))
print("dehazed PSNR %.2f dB  SSIM %.4f" % (psnr(result.dehazed, clean), ssim(result.dehazed, clean)))
print("estimated airlight:", np.round(result.airlight, 3))

# with the ground-truth transmission the scattering model inverts exactly
oracle = recover(hazy, t_true, A, t_eps=0.1)
print("oracle-t PSNR %.2f dB" % psnr(oracle, clean))
