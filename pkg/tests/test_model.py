import json

import numpy as np
import pytest

from signlab.errors import CheckpointError, DivergenceError, InputError, RegistryError, SpecError
from signlab.model import (
    ModelSpec, TrainingConfig, assemble_model, export_model, get_backbone,
    load_model, predict, predict_batch, preprocess, steps_per_epoch,
    trainable_parameter_count, train,
)


def random_images(n, seed=0, size=224):
    return np.random.default_rng(seed).integers(0, 256, size=(n, size, size, 3), dtype=np.uint8)


@pytest.mark.parametrize(
    "n,batch,factor,expected",
    [(3200, 32, 1.2, 120), (32, 32, 1.0, 1), (100, 32, 0.2, 1), (101, 32, 1.0, 4)],
)
def test_steps_per_epoch(n, batch, factor, expected):
    assert steps_per_epoch(n, batch, factor) == expected


def test_steps_per_epoch_monotonicity():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(1, 5000))
        b = int(rng.integers(1, 128))
        f = float(rng.uniform(0.1, 3.0))
        base = steps_per_epoch(n, b, f)
        assert steps_per_epoch(n + 1, b, f) >= base
        assert steps_per_epoch(n, b, f + 0.1) >= base
        assert steps_per_epoch(n, b + 1, f) <= base


def test_steps_per_epoch_input_validation():
    with pytest.raises(InputError):
        steps_per_epoch(0, 32, 1.0)
    with pytest.raises(InputError):
        steps_per_epoch(10, 0, 1.0)


def test_unknown_backbone_raises():
    with pytest.raises(RegistryError):
        assemble_model(ModelSpec(backbone="resnet9000"))


def test_frozen_exceeding_layer_count_raises():
    with pytest.raises(SpecError):
        assemble_model(ModelSpec(backbone="small_cnn", frozen_layers=500, head_widths=(8,)))


def test_zero_frozen_layers_everything_trainable(tiny_spec):
    spec = ModelSpec(backbone="small_cnn", frozen_layers=0, head_widths=(8,))
    model = assemble_model(spec)
    assert all(layer.trainable for layer in model.layers)
    assert trainable_parameter_count(model) == model.count_params()


def test_head_structure(tiny_spec):
    model = assemble_model(tiny_spec)
    names = [layer.name for layer in model.layers]
    assert names[-4:] == ["head_pool", "head_dense_0", "head_dense_1", "head_softmax"]
    assert model.output_shape == (None, 26)


def test_softmax_contract(tiny_spec):
    model = assemble_model(tiny_spec)
    images = random_images(64, seed=1)
    probs = predict_batch(model, preprocess(images, "inception_style"))
    assert probs.shape == (64, 26)
    assert np.all(probs >= 0) and np.all(probs <= 1)
    assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-6)


def test_predict_deterministic(tiny_spec):
    model = assemble_model(tiny_spec)
    image = random_images(1, seed=2)[0]
    a = predict(model, image)
    b = predict(model, image)
    assert np.array_equal(a, b)


def test_untrained_head_near_uniform():
    from tensorflow import keras

    keras.utils.set_random_seed(0)
    spec = ModelSpec(backbone="small_cnn", frozen_layers=0, head_widths=(32,))
    model = assemble_model(spec)
    probs = predict_batch(model, preprocess(random_images(1000, seed=3), "inception_style"))
    mean = probs.mean(axis=0)
    assert np.all(np.abs(mean - 1 / 26) < 0.02)


def test_export_load_round_trip(tmp_path, tiny_spec):
    model = assemble_model(tiny_spec)
    export_model(model, tiny_spec, tmp_path / "ckpt")
    loaded, spec = load_model(tmp_path / "ckpt")
    assert spec == tiny_spec
    images = random_images(100, seed=4)
    batch = preprocess(images, "inception_style")
    deviation = np.abs(predict_batch(model, batch) - predict_batch(loaded, batch)).max()
    assert deviation <= 1e-6


def test_load_missing_checkpoint(tmp_path):
    with pytest.raises(CheckpointError):
        load_model(tmp_path / "nope")


def test_load_class_count_mismatch(tmp_path):
    spec25 = ModelSpec(backbone="small_cnn", frozen_layers=0, head_widths=(8,), n_classes=25)
    model = assemble_model(spec25)
    export_model(model, spec25, tmp_path / "ckpt25")
    with pytest.raises(CheckpointError, match="classes"):
        load_model(tmp_path / "ckpt25", expect_classes=26)


def test_load_corrupt_sidecar(tmp_path, tiny_spec):
    model = assemble_model(tiny_spec)
    path = export_model(model, tiny_spec, tmp_path / "ckpt")
    (path / "model_spec.json").write_text("{broken json")
    with pytest.raises(CheckpointError):
        load_model(path)


def test_frozen_layers_bit_identical_after_training(small_dataset):
    dataset_dir, _, _ = small_dataset
    spec = ModelSpec(backbone="small_cnn", frozen_layers=3, head_widths=(16,))
    model = assemble_model(spec)
    frozen_before = [w.numpy().copy() for layer in model.layers[:3] for w in layer.weights]
    trainable_before = [w.numpy().copy() for w in model.trainable_weights]
    config = TrainingConfig(epochs=1, batch_size=8, step_size_factor=0.5, seed=1)
    train(model, dataset_dir, config, spec)
    frozen_after = [w.numpy() for layer in model.layers[:3] for w in layer.weights]
    for before, after in zip(frozen_before, frozen_after):
        assert np.array_equal(before, after)
    changed = any(
        not np.array_equal(b, a.numpy())
        for b, a in zip(trainable_before, model.trainable_weights)
    )
    assert changed


def test_train_single_epoch_run_result(small_dataset, tiny_spec):
    dataset_dir, _, _ = small_dataset
    model = assemble_model(tiny_spec)
    config = TrainingConfig(epochs=1, batch_size=16, seed=2)
    result = train(model, dataset_dir, config, tiny_spec)
    assert len(result.epochs) == 1
    assert result.best_epoch == 1
    assert result.best_val_accuracy == result.epochs[0].val_accuracy
    assert 0.0 <= result.best_val_accuracy <= 1.0


def test_best_epoch_is_first_argmax(small_dataset, tiny_spec):
    dataset_dir, _, _ = small_dataset
    from tensorflow import keras

    keras.utils.set_random_seed(5)
    model = assemble_model(tiny_spec)
    config = TrainingConfig(epochs=3, batch_size=16, seed=5)
    result = train(model, dataset_dir, config, tiny_spec)
    accs = [e.val_accuracy for e in result.epochs]
    assert result.best_val_accuracy == max(accs)
    assert result.best_epoch == accs.index(max(accs)) + 1


def test_divergent_learning_rate_raises(small_dataset):
    dataset_dir, _, _ = small_dataset
    spec = ModelSpec(backbone="small_cnn", frozen_layers=0, head_widths=(8,))
    model = assemble_model(spec)
    config = TrainingConfig(epochs=1, batch_size=8, seed=3, learning_rate=1e12)
    with pytest.raises(DivergenceError):
        train(model, dataset_dir, config, spec)


def test_single_gd_step_decreases_batch_loss():
    """Learning sanity: a small SGD step on one batch lowers that batch's loss."""
    from tensorflow import keras

    keras.utils.set_random_seed(7)
    spec = ModelSpec(backbone="small_cnn", frozen_layers=0, head_widths=(16,))
    model = assemble_model(spec)
    model.compile(optimizer=keras.optimizers.SGD(1e-3), loss="categorical_crossentropy")
    x = preprocess(random_images(16, seed=8), "inception_style")
    y = np.eye(26, dtype=np.float32)[np.random.default_rng(9).integers(0, 26, 16)]
    before = float(model.evaluate(x, y, verbose=0))
    model.train_on_batch(x, y)
    after = float(model.evaluate(x, y, verbose=0))
    assert after < before


def test_checkpoint_fidelity_against_logged_accuracy(tiny_checkpoint, small_dataset):
    from signlab.model.training import SplitLoader, _evaluate_split

    checkpoint_uri, result = tiny_checkpoint
    dataset_dir, _, _ = small_dataset
    model, spec = load_model(checkpoint_uri)
    loader = SplitLoader(dataset_dir, "validation", None)
    _, val_acc = _evaluate_split(model, loader, get_backbone(spec.backbone).input_normalization, 16)
    assert abs(val_acc - result.best_val_accuracy) <= 1e-6
