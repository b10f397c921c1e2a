"""Bit-accurate models of approximate multipliers with error metrics and DSP kernels."""

from ._axmul import (  # noqa: F401
    AxConfig,
    FpFormat,
    GrayImage,
    approx_high_radix_digit,
    dlsb_multiply,
    dlsb_negate,
    dlsb_value,
    encode_radix4,
    fp_multiply_accurate,
    fp_multiply_axfpu,
    make_test_image,
    multiply,
    multiply_accurate,
    oracle_multiply,
    pareto_front,
    partition_multiply,
    pgm_read,
    pgm_write,
    psnr,
    rad_closed_form,
    round_operand,
    sobel_cer,
    ssim,
    sweep,
)

__all__ = [
    "AxConfig",
    "FpFormat",
    "GrayImage",
    "approx_high_radix_digit",
    "dlsb_multiply",
    "dlsb_negate",
    "dlsb_value",
    "encode_radix4",
    "fp_multiply_accurate",
    "fp_multiply_axfpu",
    "make_test_image",
    "multiply",
    "multiply_accurate",
    "oracle_multiply",
    "pareto_front",
    "partition_multiply",
    "pgm_read",
    "pgm_write",
    "psnr",
    "rad_closed_form",
    "round_operand",
    "sobel_cer",
    "ssim",
    "sweep",
]
