# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np
import pytest
import torch

from shadowpose.imaging import safe_sqrt, sobel_edge_map


def test_sobel_edge_map_flat_and_ramp():
    assert (sobel_edge_map(np.full((8, 8, 3), 0.3)) == 0).all()

    # A horizontal ramp of slope 1 per pixel has |Gx| = 8 inside.
    ramp = np.tile(np.arange(8, dtype=np.float64), (8, 1))
    out = sobel_edge_map(ramp)
    assert out.shape == (8, 8, 1)
    np.testing.assert_allclose(out[1:-1, 1:-1, 0], 8.)
    # Mirrored borders cancel the gradient at the first and last column.
    np.testing.assert_allclose(out[:, 0, 0], 0.)


def test_sobel_edge_map_numpy_torch_agree():
    rng = np.random.default_rng(0)
    img = rng.random((2, 10, 9, 3))
    expected = np.stack([sobel_edge_map(i) for i in img])
    out = sobel_edge_map(torch.from_numpy(img.transpose(0, 3, 1, 2)))
    assert out.shape == (2, 1, 10, 9)
    np.testing.assert_allclose(
        out.numpy().transpose(0, 2, 3, 1), expected, rtol=0, atol=1e-10)


def test_sobel_edge_map_errors():
    with pytest.raises(ValueError, match='at least 3x3'):
        sobel_edge_map(np.zeros((2, 5)))
    with pytest.raises(ValueError, match='1 or 3 channels'):
        sobel_edge_map(np.zeros((5, 5, 2)))
    with pytest.raises(ValueError, match='1 or 3 channels'):
        sobel_edge_map(torch.zeros(1, 2, 5, 5))


def test_safe_sqrt_gradient_at_zero():
    x = torch.tensor([0., 4.], requires_grad=True)
    y = safe_sqrt(x)
    y.sum().backward()
    np.testing.assert_allclose(y.detach().numpy(), [0., 2.])
    np.testing.assert_allclose(x.grad.numpy(), [0., 0.25])

    flat = torch.full((1, 3, 6, 6), 0.5, requires_grad=True)
    sobel_edge_map(flat).sum().backward()
    assert torch.isfinite(flat.grad).all()


@pytest.mark.parametrize('dtype', [torch.float32, torch.float64])
def test_sobel_edge_map_flat_tensor_is_exact_zero(dtype):
    for value in (0.2, 0.7, 1 / 3):
        flat = torch.full((2, 3, 8, 8), value, dtype=dtype)
        assert (sobel_edge_map(flat) == 0).all()
