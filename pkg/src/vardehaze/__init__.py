"""Single-image dehazing with fused coarse transmission and ADMM refinement."""
from .airlight import estimate_airlight
from .coarse import FusionParams, coarse_transmission
from .metrics import QualityReport, psnr, ssim
from .pipeline import DehazeResult, PipelineConfig, dehaze
from .recovery import recover
from .refinement import NonFiniteError, RefineParams, refine
from .synthesis import depth_to_transmission, synthesize

__all__ = [
    "estimate_airlight", "FusionParams", "coarse_transmission", "QualityReport", "psnr",
    "ssim", "DehazeResult", "PipelineConfig", "dehaze", "recover", "NonFiniteError",
    "RefineParams", "refine", "depth_to_transmission", "synthesize",
]
__version__ = "0.1.0"
