"""Smoke tests for the Python module: a few exact values and one small sweep."""

import math
import os
import sys
import tempfile

import axmul


def test_multiply():
    assert axmul.multiply_accurate(8, 3, -2) == -6
    assert axmul.oracle_multiply(8, 7, 5) == 35
    assert axmul.multiply("rad:k=6", 16, 100, 5) == 400
    assert axmul.multiply("acc", 16, 1234, -567) == 1234 * -567
    assert axmul.multiply("axfxu:p=0,r=0", 16, -321, 999) == -321 * 999
    assert axmul.multiply_accurate(64, -(2**63), -(2**63)) == 2**126
    assert axmul.encode_radix4(4, 6) == [-2, 2]
    assert axmul.round_operand(8, 7, 2) == 8
    assert axmul.approx_high_radix_digit(5, 6)[0] == 4


def test_dlsb():
    assert axmul.dlsb_value(4, 7, 1) == 8
    assert axmul.dlsb_negate(4, 7, 1) == (-8, 0)
    assert axmul.dlsb_multiply(4, 7, 1, 7, 1) == 64
    assert axmul.partition_multiply(16, 0x7FFF, -0x8000) == -1073709056


def test_float():
    half = axmul.FpFormat.half()
    one = 0x3C00
    out = axmul.fp_multiply_accurate(one, one, half)
    assert out["flag"] == "value"
    assert out["value"] == 1.0
    approx = axmul.fp_multiply_axfpu(one, one, half, 2, 4)
    assert approx["flag"] == "value"


def test_metrics():
    rep = axmul.rad_closed_form(16, 6)
    assert abs(rep["mred"] * 100 - 0.08) < 0.005
    rows = axmul.sweep(16, ["acc", "axfxu:p=2,r=4"], samples=2000, seed=3)
    assert rows[0]["mred"] == 0.0
    assert rows[1]["mred"] > 0.0
    assert axmul.pareto_front([(1.0, 1.0), (2.0, 2.0)]) == [0]


def test_images():
    img = axmul.make_test_image()
    assert img.width == 256 and img.height == 256
    assert math.isinf(axmul.psnr(img, img))
    assert axmul.ssim(img, img) == 1.0
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "scene.pgm")
        axmul.pgm_write(path, img)
        assert axmul.pgm_read(path) == img
    assert axmul.sobel_cer("rad:k=6") >= 0.995


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"{name}: ok")
            except AssertionError as exc:
                failures += 1
                print(f"{name}: FAILED {exc}")
    sys.exit(1 if failures else 0)
