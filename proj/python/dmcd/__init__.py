from ._dmcd import (
    DivergenceError,
    MultiscaleFrames,
    add_noise,
    backward_diff,
    circular_convolve,
    demix,
    directional_laplacian,
    dmc_norm,
    forward_diff,
    load_image,
    make_blur_kernel,
    mec,
    mse,
    qq_r_squared,
    run_experiment,
    save_image,
    shrink,
    sparsity,
)

__all__ = [
    "DivergenceError",
    "MultiscaleFrames",
    "add_noise",
    "backward_diff",
    "circular_convolve",
    "demix",
    "directional_laplacian",
    "dmc_norm",
    "forward_diff",
    "load_image",
    "make_blur_kernel",
    "mec",
    "mse",
    "qq_r_squared",
    "run_experiment",
    "save_image",
    "shrink",
    "sparsity",
]
