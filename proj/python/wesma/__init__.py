"""Undecimated wavelet transform, wavelet-shrinkage denoising and the
word-embedded semantic marginal autoencoder pipeline."""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # pragma: no cover - build-tree layout
    from _core import *  # noqa: F401,F403

__all__ = [
    "UwtDecomposition",
    "uwt_forward",
    "uwt_inverse",
    "max_levels",
    "dilated_circular_convolve",
    "denoise",
    "snr_db",
    "mad_sigma",
    "universal_threshold",
    "apply_threshold",
    "gen_signal",
    "add_awgn",
    "normalize",
    "tokenize",
    "EmbeddingMatrix",
    "cosine_similarity",
    "WesmaModel",
    "fit_wesma",
    "transform",
    "reconstruction_error",
    "roc_auc",
    "select_threshold",
]
