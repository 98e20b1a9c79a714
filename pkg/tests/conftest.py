import gc
import os
import sys

os.environ.setdefault("TF_CPP_MIN_LOG_LEVEL", "2")

import pytest

from signlab.dataset import build_dataset, generate_synthetic_fixture


def pytest_collection_modifyitems(items):
    # multi-hour training tests go last so their memory footprint does not
    # sit under the rest of the suite
    items.sort(key=lambda item: 1 if item.get_closest_marker("e2e") else 0)


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {outcome}: {name}")
from signlab.model import ModelSpec, TrainingConfig


@pytest.fixture(autouse=True, scope="module")
def _release_tf_memory():
    # keras models carry reference cycles; without an explicit collect the
    # suite accumulates several GB across modules and can hit the OOM killer
    yield
    if "tensorflow" in sys.modules:
        from tensorflow import keras

        keras.backend.clear_session()
    gc.collect()
    try:
        # hand freed pages back to the OS; glibc otherwise keeps the suite's
        # RSS at its high-water mark and later modules trip the OOM killer
        import ctypes

        ctypes.CDLL("libc.so.6").malloc_trim(0)
    except OSError:
        pass


@pytest.fixture(scope="session")
def fixture_root(tmp_path_factory):
    return tmp_path_factory.mktemp("signlab")


@pytest.fixture(scope="session")
def small_dataset(fixture_root):
    """26-class synthetic dataset, 8 frames per class, fully built on disk."""
    manifests = generate_synthetic_fixture(fixture_root / "videos", frames_per_class=8, seed=7)
    out = fixture_root / "dataset"
    report = build_dataset(manifests, out)
    return out, report, manifests


@pytest.fixture(scope="session")
def tiny_spec():
    return ModelSpec(backbone="small_cnn", frozen_layers=2, head_widths=(32, 16))


@pytest.fixture(scope="session")
def tiny_checkpoint(fixture_root, small_dataset, tiny_spec):
    """A small trained checkpoint shared by inference/service tests."""
    from signlab.experiments import run_once

    dataset_dir, _, _ = small_dataset
    config = TrainingConfig(epochs=2, batch_size=16, step_size_factor=1.0, seed=11)
    out = fixture_root / "tinyrun"
    result = run_once(tiny_spec, config, dataset_dir, out, run_name="tiny")
    return result.checkpoint_uri, result
