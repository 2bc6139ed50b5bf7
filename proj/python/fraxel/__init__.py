"""Fractal texture descriptors and cross-validated texture classification."""

from ._fraxel import (
    AlignmentError,
    DegenerateInputError,
    FormatError,
    FraxelError,
    IoError,
    PairingError,
    ParameterError,
    ResourceError,
    bm_descriptors,
    bm_dimension,
    cross_validate,
    dilation_volumes,
    discriminant_transform,
    extract_windows,
    fourier_descriptors,
    gabor_descriptors,
    load_image,
    loglog_slope,
    luminance,
    metrics,
    radon_align,
    rotate_image,
    save_pgm,
    scatter_matrices,
    synth_fbm,
    voss_curve,
    voss_descriptors,
    voss_dimension,
)

__version__ = "0.1.0"


def proposed_descriptors(image, r_max=10.0, deltas=None):
    """Bouligand-Minkowski log-volumes followed by Voss log-information values."""
    bm = bm_descriptors(image, r_max)
    vs = voss_descriptors(image) if deltas is None else voss_descriptors(image, list(deltas))
    return list(bm) + list(vs)
