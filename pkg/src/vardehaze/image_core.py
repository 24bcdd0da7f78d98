"""Image containers, periodic difference operators and FFT helpers.

Scalar fields are 2-D float64 arrays of shape (H, W).  Color images are
(H, W, 3) float64 arrays with nominal range [0, 1].  A gradient pair is a
(2, H, W) array holding the horizontal (index 0) and vertical (index 1)
forward differences.  All difference operators use circular boundaries so
that ``-divergence(gradient(.))`` is diagonalized by the 2-D DFT.
"""
import numpy as np


def as_float_image(img):
    """Convert an 8/16-bit integer or float array to float64 in [0, 1]."""
    img = np.asarray(img)
    if img.dtype == np.uint8:
        return img.astype(np.float64) / 255.0
    if img.dtype == np.uint16:
        return img.astype(np.float64) / 65535.0
    if img.dtype == np.bool_:
        return img.astype(np.float64)
    out = img.astype(np.float64)
    if not np.all(np.isfinite(out)):
        raise ValueError("image contains non-finite values")
    return out


def check_color(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) color image, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("empty image")
    return img


def gradient(f):
    """Forward differences with periodic wrap.

    ``dx[i, j] = f[i, j+1] - f[i, j]`` and ``dy[i, j] = f[i+1, j] - f[i, j]``,
    indices taken modulo the image size.
    """
    f = np.asarray(f, dtype=np.float64)
    dx = np.roll(f, -1, axis=1) - f
    dy = np.roll(f, -1, axis=0) - f
    return np.stack([dx, dy])


def divergence(g):
    """Negative adjoint of :func:`gradient` (backward differences, periodic)."""
    g = np.asarray(g, dtype=np.float64)
    gx, gy = g[0], g[1]
    return (gx - np.roll(gx, 1, axis=1)) + (gy - np.roll(gy, 1, axis=0))


def laplacian(f):
    return divergence(gradient(f))


def gradient_transfer_spectrum(height, width):
    """DFT transfer functions of the periodic forward differences.

    Returns ``(Dx, Dy)``, complex (H, W) arrays with
    ``fft2(gradient(f)[k]) == D_k * fft2(f)``.  ``|Dx|^2 + |Dy|^2`` is the
    spectrum of ``-laplacian`` and is exactly zero at the DC term.
    """
    if height < 1 or width < 1:
        raise ValueError("grid dimensions must be positive")
    kx = np.arange(width)
    ky = np.arange(height)
    # exp(2*pi*i*0) is exactly 1, so the DC entry is an exact zero
    ex = np.exp(2j * np.pi * kx / width) - 1.0
    ey = np.exp(2j * np.pi * ky / height) - 1.0
    ex[0] = 0.0
    ey[0] = 0.0
    Dx = np.broadcast_to(ex[None, :], (height, width)).copy()
    Dy = np.broadcast_to(ey[:, None], (height, width)).copy()
    return Dx, Dy


def gradient_energy_spectrum(height, width):
    """``conj(F(grad)) F(grad)`` as a real (H, W) array."""
    Dx, Dy = gradient_transfer_spectrum(height, width)
    return (np.abs(Dx) ** 2 + np.abs(Dy) ** 2).real


def fft2(f):
    return np.fft.fft2(f)


def ifft2(F):
    return np.fft.ifft2(F)


def adjoint_gradient_spectrum(g, spectrum=None):
    """Spectrum of ``grad^T g`` (= ``-divergence(g)``) computed in frequency space."""
    g = np.asarray(g, dtype=np.float64)
    Dx, Dy = spectrum if spectrum is not None else gradient_transfer_spectrum(*g.shape[1:])
    return np.conj(Dx) * fft2(g[0]) + np.conj(Dy) * fft2(g[1])


def clamp(f, lo, hi):
    if lo > hi:
        raise ValueError(f"clamp bounds reversed: lo={lo} > hi={hi}")
    return np.clip(np.asarray(f, dtype=np.float64), lo, hi)
