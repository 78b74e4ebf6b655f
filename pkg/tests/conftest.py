import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

CORPUS = [
    "astronaut", "brick", "camera", "chelsea", "coffee", "coins", "grass", "gravel",
    "hubble_deep_field", "immunohistochemistry", "moon", "retina", "rocket", "cell",
    "microaneurysms", "clock", "page", "text",
]

ACCEPTANCE_LINES = {}


def natural_images():
    """Twenty natural photographs bundled with scikit-image."""
    from skimage import data

    out = {n: getattr(data, n)() for n in CORPUS}
    left, right, _ = data.stereo_motorcycle()
    out["motorcycle_left"], out["motorcycle_right"] = left, right
    return out


@pytest.fixture(scope="session")
def natural_corpus(tmp_path_factory):
    pytest.importorskip("skimage")
    from curveflow.imageio import save_image

    d = tmp_path_factory.mktemp("corpus")
    for name, img in natural_images().items():
        save_image(d / f"{name}.png", img)
    return d


@pytest.fixture(scope="session")
def camera256():
    pytest.importorskip("skimage")
    from skimage import data, transform

    img = data.camera().astype(np.float64)
    return transform.resize(img, (256, 256), anti_aliasing=True, preserve_range=True)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
