"""Shared fixtures: image corpora and a trained pair model.

The corpus is built from the color photographs bundled with
scikit-image, cut into 128x128 tiles.  Everything downstream is seeded,
so the trained model and all derived numbers are reproducible.
"""

import time

import numpy as np
import pytest
import skimage.data as skd

from quatimg import imgio
from quatimg.autoencoder import TrainConfig, extract_pairs, train_detailed

TILE = 128
SOURCES = ["astronaut", "chelsea", "coffee", "rocket",
           "hubble_deep_field", "cat", "immunohistochemistry", "retina"]
TILES_PER_SOURCE = 8
SPLIT_SEED = 0


def _source_image(name):
    img = getattr(skd, name)()
    if img.ndim == 3 and img.shape[2] == 4:
        img = img[:, :, :3]
    return img


def _tile_images():
    out = []
    for name in SOURCES:
        img = _source_image(name)
        h, w = img.shape[:2]
        coords = [(i, j) for i in range(0, h - TILE + 1, TILE)
                  for j in range(0, w - TILE + 1, TILE)]
        if len(coords) > TILES_PER_SOURCE:
            idx = np.linspace(0, len(coords) - 1,
                              TILES_PER_SOURCE).round().astype(int)
            coords = [coords[k] for k in idx]
        for i, j in coords:
            out.append(np.ascontiguousarray(img[i:i + TILE, j:j + TILE]))
    return out


@pytest.fixture(scope="session")
def tile_images():
    imgs = _tile_images()
    assert len(imgs) >= 50
    return imgs


@pytest.fixture(scope="session")
def corpus_dir(tile_images, tmp_path_factory):
    """The tile corpus written out as PNG files."""
    d = tmp_path_factory.mktemp("corpus")
    for k, img in enumerate(tile_images):
        imgio.save_image(img, d / f"tile{k:03d}.png")
    return d


@pytest.fixture(scope="session")
def trained_state(tile_images):
    """(model, train tiles, held-out tiles, training seconds)."""
    rng = np.random.default_rng(SPLIT_SEED)
    order = rng.permutation(len(tile_images))
    n_train = int(round(0.6 * len(tile_images)))
    train_imgs = [tile_images[i] for i in order[:n_train]]
    test_imgs = [tile_images[i] for i in order[n_train:]]
    cfg = TrainConfig()
    t0 = time.perf_counter()
    samples = extract_pairs(train_imgs, cfg)
    result = train_detailed(samples, cfg)
    seconds = time.perf_counter() - t0
    return result.model, train_imgs, test_imgs, seconds


@pytest.fixture(scope="session")
def trained_model(trained_state):
    return trained_state[0]


@pytest.fixture(scope="session")
def desk_corpus():
    """Five 256x256 crops from distinct photographs."""
    crops = []
    for name in ["astronaut", "coffee", "rocket", "hubble_deep_field",
                 "immunohistochemistry"]:
        img = _source_image(name)
        crops.append(np.ascontiguousarray(img[:256, :256]))
    assert all(c.shape == (256, 256, 3) for c in crops)
    return crops


@pytest.fixture(scope="session")
def image_512x384():
    """A 512-wide, 384-tall natural crop for the timing curve."""
    return np.ascontiguousarray(_source_image("rocket")[:384, :512])


@pytest.fixture(scope="session")
def small_image():
    return np.ascontiguousarray(_source_image("chelsea")[:96, :96])
