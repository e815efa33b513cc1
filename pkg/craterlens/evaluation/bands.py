from craterlens.utils import ArgumentError

__all__ = ["diameter_band_for_scale", "scaled_meters_per_pixel"]


def diameter_band_for_scale(px_min: float, px_max: float, meters_per_pixel: float) -> tuple[float, float]:
    """Crater diameters (km) covered by a detector trained on `px_min`..`px_max` pixel craters at this resolution."""
    if min(px_min, px_max, meters_per_pixel) <= 0:
        raise ArgumentError("Pixel range and resolution must be positive")
    return px_min * meters_per_pixel / 1000.0, px_max * meters_per_pixel / 1000.0


def scaled_meters_per_pixel(meters_per_pixel: float, scale: float) -> float:
    """Resolution of an image super-resolved by `scale`."""
    if scale <= 0:
        raise ArgumentError(f"Scale must be positive, got {scale}")
    return meters_per_pixel / scale
