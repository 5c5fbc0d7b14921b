from fractions import Fraction

import numpy as np
import pytest

from quaddyn.cantor import CircleInterval
from quaddyn.combdomain import OmegaDomain, toy_sequences
from quaddyn.dynamics import BORDERLINE, FAR, NEAR
from quaddyn.errors import InvariantError
from quaddyn.imaging import (
    classification_image,
    cover_strip_image,
    domain_image,
    ppm_bytes,
    write_ppm,
)


def test_ppm_header_and_payload():
    rgb = np.zeros((2, 3, 3), dtype=np.uint8)
    data = ppm_bytes(rgb)
    assert data.startswith(b"P6\n3 2\n255\n")
    assert len(data) == len(b"P6\n3 2\n255\n") + 2 * 3 * 3


def test_ppm_rejects_wrong_shape():
    with pytest.raises(InvariantError):
        ppm_bytes(np.zeros((4, 4), dtype=np.uint8))


def test_classification_image_flips_rows():
    cells = np.array([[FAR, NEAR], [BORDERLINE, FAR]], dtype=np.int8)
    rgb = classification_image(cells)
    assert rgb.shape == (2, 2, 3)
    # Bottom data row must land on the last image row.
    assert tuple(rgb[1, 0]) == tuple(classification_image(cells[:1])[0, 0])


def test_cover_strip_marks_arcs():
    arcs = [CircleInterval(Fraction(0), Fraction(1, 4))]
    rgb = cover_strip_image(arcs, width=80, height=8)
    assert rgb.shape == (8, 80, 3)
    left = rgb[4, 2]
    right = rgb[4, 70]
    assert not np.array_equal(left, right)


def test_domain_image_deterministic():
    dom = OmegaDomain(*toy_sequences())
    a = domain_image(dom, 2, resolution=48)
    b = domain_image(dom, 2, resolution=48)
    assert a.shape == (48, 48, 3)
    assert np.array_equal(a, b)


def test_write_ppm_round_trip(tmp_path):
    rgb = np.full((4, 4, 3), 7, dtype=np.uint8)
    target = tmp_path / "img.ppm"
    write_ppm(target, rgb)
    assert target.read_bytes() == ppm_bytes(rgb)
