import json
import math

import numpy as np
import pytest

from app.core import synthetic
from app.core.dmd_core import truncated_svd, vandermonde
from app.schemas.grid import Grid
from app.schemas.synthetic import BubbleSpec

# (eigenvalue, amplitude) per conjugate pair; moduli and angles well apart
THREE_PAIRS = [
    (0.99 * np.exp(2j * math.pi / 20), 1.0 + 0.0j),
    (0.97 * np.exp(2j * math.pi / 8), 0.6 + 0.5j),
    (1.0 * np.exp(2j * math.pi / 13), 0.3 - 0.4j),
]

SMALL_BUBBLES = [
    (BubbleSpec(center=(2.0, 2.0), widths=(1.5, 1.5)), BubbleSpec(center=(9.0, 3.0), widths=(1.5, 1.5))),
    (BubbleSpec(center=(5.0, 7.0), widths=(1.5, 1.5)), BubbleSpec(center=(2.0, 8.0), widths=(1.5, 1.5))),
    (BubbleSpec(center=(9.0, 8.0), widths=(1.5, 1.5)), BubbleSpec(center=(6.0, 2.0), widths=(1.5, 1.5))),
    (BubbleSpec(center=(1.0, 5.0), widths=(1.2, 1.2)), BubbleSpec(center=(10.0, 6.0), widths=(1.2, 1.2))),
]


@pytest.fixture
def small_grid() -> Grid:
    return Grid(n_y=12, n_z=10, dy=1.0, dz=1.0, h=30.0)


@pytest.fixture
def storm_grid() -> Grid:
    """Full-size y-z slice: 40 x 97 points, 0.5 km by 20/96 km, 30 s steps"""
    return Grid(n_y=40, n_z=97, dy=0.5, dz=20.0 / 96.0, h=30.0)


@pytest.fixture
def three_pair_truth(small_grid):
    pairs = [
        (eigenvalue, amplitude, real, imag)
        for (eigenvalue, amplitude), (real, imag) in zip(THREE_PAIRS, SMALL_BUBBLES)
    ]
    return synthetic.pairs_fixture(small_grid, pairs)


@pytest.fixture
def storm_truth(storm_grid):
    """Three pairs of bubbles on the full-size grid, noiseless"""
    bubbles = [
        (BubbleSpec(center=(4.0, 4.0), widths=(2.0, 2.5)), BubbleSpec(center=(15.0, 5.0), widths=(2.0, 2.0))),
        (BubbleSpec(center=(9.0, 12.0), widths=(2.5, 2.0)), BubbleSpec(center=(3.0, 16.0), widths=(2.0, 2.0))),
        (BubbleSpec(center=(16.0, 15.0), widths=(1.5, 2.0)), BubbleSpec(center=(10.0, 2.0), widths=(2.0, 1.5))),
    ]
    pairs = [
        (eigenvalue, amplitude, real, imag)
        for (eigenvalue, amplitude), (real, imag) in zip(THREE_PAIRS, bubbles)
    ]
    return synthetic.pairs_fixture(storm_grid, pairs, field_name="storm")


@pytest.fixture
def strong_weak_truth(small_grid):
    """Two strong pairs (|b| = 1) and two weak pairs (|b| = 1e-3)"""
    spectrum = [
        (0.99 * np.exp(2j * math.pi / 20), 1.0),
        (0.98 * np.exp(2j * math.pi / 7), 1.0j),
        (0.97 * np.exp(2j * math.pi / 11), 1e-3),
        (0.96 * np.exp(2j * math.pi / 4.5), -1e-3j),
    ]
    pairs = [
        (eigenvalue, amplitude, real, imag)
        for (eigenvalue, amplitude), (real, imag) in zip(spectrum, SMALL_BUBBLES)
    ]
    return synthetic.pairs_fixture(small_grid, pairs)


@pytest.fixture
def qp_instance():
    """Factory for random projected-DMD amplitude problems (r <= 10, N <= 40)"""

    def build(rng: np.random.Generator):
        r = int(rng.integers(2, 11))
        n_steps = int(rng.integers(r + 5, 41))
        p = r + 8
        y = rng.standard_normal((p, n_steps))
        svd = truncated_svd(y, rank=r)

        # unitary W, eigenvalues spread around the unit circle
        w, _ = np.linalg.qr(rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r)))
        angles = 2 * math.pi * (np.arange(r) + 0.3 * rng.random(r)) / r
        eigenvalues = rng.uniform(0.95, 1.02, r) * np.exp(1j * angles)
        t = vandermonde(eigenvalues, n_steps)
        return {"y": y, "svd": svd, "w": w, "eigenvalues": eigenvalues, "t": t}

    return build


def fixture_document(grid: Grid, pairs, noise_sigma: float = 0.0, seed: int = 0) -> dict:
    """Fixture JSON listing each pair member explicitly"""
    modes = []
    for (eigenvalue, amplitude), (real, imag) in pairs:
        pattern = {"real": real.model_dump(), "imag": imag.model_dump()}
        modes.append(
            {
                "eigenvalue": [eigenvalue.real, eigenvalue.imag],
                "amplitude": [complex(amplitude).real, complex(amplitude).imag],
                "pattern": {**pattern, "conjugate": False},
            }
        )
        modes.append(
            {
                "eigenvalue": [eigenvalue.real, -eigenvalue.imag],
                "amplitude": [complex(amplitude).real, -complex(amplitude).imag],
                "pattern": {**pattern, "conjugate": True},
            }
        )
    return {
        "grid": grid.model_dump(),
        "modes": modes,
        "noise_sigma": noise_sigma,
        "seed": seed,
        "field_name": "synthetic",
    }


@pytest.fixture
def fixture_spec_path(tmp_path, small_grid):
    path = tmp_path / "fixture.json"
    document = fixture_document(small_grid, zip(THREE_PAIRS, SMALL_BUBBLES))
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


@pytest.fixture
def three_pair_spectrum():
    spectrum = []
    for eigenvalue, _ in THREE_PAIRS:
        spectrum += [eigenvalue, np.conj(eigenvalue)]
    return spectrum
