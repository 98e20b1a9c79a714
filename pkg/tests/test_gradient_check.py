"""Analytic gradients of the dense head vs central finite differences.

The backbone is replaced by an identity stub (the input feeds the head
directly) and everything runs in float64 so the finite-difference
comparison is numerically meaningful.
"""

import numpy as np
import pytest


def build_head_model():
    from tensorflow import keras

    keras.utils.set_random_seed(0)
    inp = keras.Input(shape=(12,), dtype="float64")
    x = keras.layers.Dense(10, activation="relu", dtype="float64")(inp)
    x = keras.layers.Dense(8, activation="relu", dtype="float64")(x)
    out = keras.layers.Dense(5, activation="softmax", dtype="float64")(x)
    return keras.Model(inp, out)


def batch_loss(model, x, y):
    probs = model(x, training=False).numpy()
    return float(-np.mean(np.log(np.clip(probs[np.arange(len(y)), y], 1e-300, 1.0))))


def analytic_gradients(model, x, y):
    import tensorflow as tf

    y_onehot = np.eye(5)[y]
    with tf.GradientTape() as tape:
        probs = model(x, training=True)
        loss = tf.reduce_mean(tf.keras.losses.categorical_crossentropy(y_onehot, probs))
    return [g.numpy() for g in tape.gradient(loss, model.trainable_weights)]


def run_gradient_check(model, rel_tol=1e-4, coords_per_tensor=10):
    """Compare analytic gradients to central differences on sampled coordinates.

    Returns the number of coordinates checked; raises AssertionError on the
    first mismatch beyond rel_tol.
    """
    rng = np.random.default_rng(1)
    x = rng.normal(size=(6, 12))
    y = rng.integers(0, 5, size=6)
    grads = analytic_gradients(model, x, y)
    eps = 1e-6
    checked = 0
    pick = np.random.default_rng(2)
    for weight, grad in zip(model.trainable_weights, grads):
        values = weight.numpy()
        flat = values.reshape(-1)
        for idx in pick.choice(flat.size, size=min(coords_per_tensor, flat.size), replace=False):
            original = flat[idx]
            flat[idx] = original + eps
            weight.assign(values)
            up = batch_loss(model, x, y)
            flat[idx] = original - eps
            weight.assign(values)
            down = batch_loss(model, x, y)
            flat[idx] = original
            weight.assign(values)
            numeric = (up - down) / (2 * eps)
            analytic = grad.reshape(-1)[idx]
            denom = max(abs(numeric), abs(analytic), 1e-8)
            assert abs(numeric - analytic) / denom <= rel_tol, (
                f"gradient mismatch at {weight.name}[{idx}]: {analytic} vs {numeric}"
            )
            checked += 1
    return checked


def test_gradients_match_central_finite_differences():
    from tensorflow import keras

    keras.backend.set_floatx("float64")
    try:
        checked = run_gradient_check(build_head_model())
    finally:
        keras.backend.set_floatx("float32")
    assert checked >= 40
