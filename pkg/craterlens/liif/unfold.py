from craterlens.nn.layers import col2im3x3, im2col3x3
from craterlens.utils import ArgumentError, FloatArray

__all__ = ["unfold3x3", "unfold3x3_backward"]


def unfold3x3(m: FloatArray) -> FloatArray:
    """Concatenates the 3x3 neighbourhood of every latent.

    Output channel ``c * 9 + (dm + 1) * 3 + (dn + 1)`` at (i, j) holds
    ``m[c, i + dm, j + dn]``, or 0 outside the grid.
    """
    if m.ndim != 3 or m.shape[1] < 1 or m.shape[2] < 1:
        raise ArgumentError(f"Expected a non-empty (D, H, W) feature map, got shape {m.shape}")
    d, h, w = m.shape
    return im2col3x3(m).reshape(9 * d, h, w)


def unfold3x3_backward(dunfolded: FloatArray) -> FloatArray:
    """Adjoint of `unfold3x3`: sums each slot's gradient back onto its source latent."""
    if dunfolded.ndim != 3 or dunfolded.shape[0] % 9 != 0:
        raise ArgumentError(f"Expected a (9D, H, W) gradient, got shape {dunfolded.shape}")
    nd, h, w = dunfolded.shape
    return col2im3x3(dunfolded.reshape(nd, h * w), (nd // 9, h, w))
