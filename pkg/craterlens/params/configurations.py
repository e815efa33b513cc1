import dataclasses
import hashlib
import json
import os
import sys
import typing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    from typing import Self
else:
    from typing_extensions import Self

from dataclasses_json import dataclass_json

from craterlens.detect.georef import GeoRef
from craterlens.detect.pipeline import PostprocParams
from craterlens.evaluation.gridsearch import DEFAULT_M_GRID, DEFAULT_S_GRID, DEFAULT_TAU_GRID
from craterlens.evaluation.synth import SynthNoise
from craterlens.utils import ArgumentError, FormatError, type_self_kwargs_as

__all__ = [
    "TrainingConfig",
    "SRConfig",
    "TilingConfig",
    "PostprocGrids",
    "SynthConfig",
    "RunConfiguration",
    "full_config",
    "desk_config",
    "test_config",
    "PRESETS",
]


@dataclass_json
@dataclass
class TrainingConfig:
    """
    Super-resolution training schedule.

    Parameters
    ----------
    epochs: int
        Number of epochs.
    steps_per_epoch: int
        Optimisation steps per epoch.
    batch_size: int
        Training pairs per step.
    lr: float
        Initial Adam learning rate.
    lr_decay_epoch: int
        Epoch from which the learning rate is multiplied by `lr_decay_factor`.
    lr_decay_factor: float
        Learning rate multiplier after the decay epoch.
    patch_size: int
        Side of the low-resolution training patch.
    scale_min, scale_max: float
        Range of the uniformly drawn scale factor.
    sample_q: int, optional
        Number of target pixels used per pair in each step; all of them when None.
    log_every: int
        Log the loss every this many steps; 0 disables progress logging.
    """

    epochs: int = 300
    steps_per_epoch: int = 100
    batch_size: int = 8
    lr: float = 1e-4
    lr_decay_epoch: int = 200
    lr_decay_factor: float = 0.5
    patch_size: int = 48
    scale_min: float = 1.0
    scale_max: float = 4.0
    sample_q: Optional[int] = 2304
    log_every: int = 10


@dataclass_json
@dataclass
class SRConfig:
    """
    Model architecture.

    Parameters
    ----------
    depth: int
        Feature channels of the encoder.
    n_blocks: int
        Residual blocks of the encoder.
    hidden: int
        Width of the hidden decoder layers.
    n_hidden: int
        Number of hidden decoder layers.
    chunk_size: int
        Queries decoded at once during prediction.
    """

    depth: int = 16
    n_blocks: int = 2
    hidden: int = 256
    n_hidden: int = 4
    chunk_size: int = 4096


@dataclass_json
@dataclass
class TilingConfig:
    patch_size: int = 1024
    overlap: float = 0.5


@dataclass_json
@dataclass
class PostprocGrids:
    """Values tried by the post-processing grid search."""

    m: list[float] = field(default_factory=lambda: list(DEFAULT_M_GRID))
    s: list[float] = field(default_factory=lambda: list(DEFAULT_S_GRID))
    tau: list[float] = field(default_factory=lambda: list(DEFAULT_TAU_GRID))


@dataclass_json
@dataclass
class SynthConfig:
    """
    Synthetic catalog and detector.

    Parameters
    ----------
    n_craters: int
        Requested catalog size.
    width_px, height_px: int
        Size of the simulated mosaic.
    band_km: tuple[float, float]
        Crater diameter range.
    border_px: float
        Craters keep this distance from the mosaic edge.
    min_gap_px: float
        Minimal distance between crater boxes.
    noise: SynthNoise
        Simulated detector imperfections.
    """

    n_craters: int = 200
    width_px: int = 4096
    height_px: int = 4096
    band_km: tuple[float, float] = (5.0, 10.0)
    border_px: float = 0.0
    min_gap_px: float = 2.0
    noise: SynthNoise = field(default_factory=SynthNoise)


@dataclass_json
@dataclass(kw_only=True)
class _RunConfigurationDataClass:
    """
    Parameters of a craterlens run.

    Parameters
    ----------
    seed: int
        Seed of the run's random generator.
    georef: GeoRef
        Georeference of the mosaic the detections come from.
    postproc: PostprocParams
        Post-processing parameters used outside the grid search.
    grids: PostprocGrids
        Grid search values.
    iou_min: float
        Minimal IoU of a true positive.
    tau_combine: float
        NMS threshold used when combining models.
    training: TrainingConfig
        Super-resolution training schedule.
    sr: SRConfig
        Model architecture.
    tiling: TilingConfig
        Detection patches.
    synth: SynthConfig
        Synthetic data generation.
    """

    seed: int = 0
    georef: GeoRef = field(default_factory=GeoRef)
    postproc: PostprocParams = field(default_factory=PostprocParams)
    grids: PostprocGrids = field(default_factory=PostprocGrids)
    iou_min: float = 0.5
    tau_combine: float = 0.5
    training: TrainingConfig = field(default_factory=TrainingConfig)
    sr: SRConfig = field(default_factory=SRConfig)
    tiling: TilingConfig = field(default_factory=TilingConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)


def _check_keys(cls: type, data: Any, where: str):
    if not isinstance(data, dict):
        raise FormatError(f"{where or 'configuration'}: expected an object")
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise FormatError(f"{where or 'configuration'}: unknown keys {sorted(unknown)}")
    for key, value in data.items():
        if dataclasses.is_dataclass(hints[key]):
            _check_keys(hints[key], value, f"{where}.{key}" if where else key)


class RunConfiguration(_RunConfigurationDataClass):
    @type_self_kwargs_as(_RunConfigurationDataClass.__init__)
    def replace(self, **kwargs) -> Self:
        return dataclasses.replace(self, **kwargs)

    @classmethod
    def from_json_file(cls, path: str | os.PathLike) -> "RunConfiguration":
        """Reads a configuration file; keys left out keep their default values."""
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise FormatError(f"invalid JSON: {e}", path=str(path)) from e
        try:
            _check_keys(cls, data, "")
            return cls.from_dict(data)  # type: ignore
        except FormatError as e:
            raise FormatError(str(e), path=str(path)) from e
        except (KeyError, TypeError, ValueError) as e:
            raise FormatError(f"invalid configuration: {e}", path=str(path)) from e

    def validate(self) -> Self:
        """Checks value ranges across sections; returns self."""
        if not (self.grids.m and self.grids.s and self.grids.tau):
            raise ArgumentError("Grid search grids must be nonempty")
        for m in self.grids.m:
            PostprocParams(m=m)
        for s in self.grids.s:
            PostprocParams(s=s)
        for tau in self.grids.tau:
            PostprocParams(tau=tau)
        if not 0 < self.iou_min <= 1 or not 0 < self.tau_combine <= 1:
            raise ArgumentError("iou_min and tau_combine must lie in (0, 1]")

        t = self.training
        if min(t.epochs, t.steps_per_epoch, t.batch_size, t.patch_size) < 1 or t.lr <= 0 or t.log_every < 0:
            raise ArgumentError("Training sizes and learning rate must be positive")
        if not 1.0 <= t.scale_min <= t.scale_max:
            raise ArgumentError(f"Invalid scale range [{t.scale_min}, {t.scale_max}]")
        if t.sample_q is not None and t.sample_q < 1:
            raise ArgumentError(f"sample_q must be positive, got {t.sample_q}")
        if min(self.sr.depth, self.sr.hidden, self.sr.n_hidden, self.sr.chunk_size) < 1 or self.sr.n_blocks < 0:
            raise ArgumentError("Model sizes must be positive")
        if self.tiling.patch_size < 1 or not 0 <= self.tiling.overlap < 1:
            raise ArgumentError("Invalid tiling parameters")
        return self

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form."""
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))  # type: ignore
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# Full-size hyperparameters
full_config = RunConfiguration()

# Settings that train and evaluate within minutes on a desktop CPU
desk_config = RunConfiguration(
    training=TrainingConfig(
        epochs=20,
        steps_per_epoch=25,
        batch_size=4,
        lr=1e-3,
        lr_decay_epoch=15,
        patch_size=16,
        sample_q=256,
    ),
    sr=SRConfig(hidden=64),
    tiling=TilingConfig(patch_size=256),
    synth=SynthConfig(width_px=1024, height_px=1024, n_craters=100),
)

# Configuration used by the test-suite
test_config = RunConfiguration(
    training=TrainingConfig(
        epochs=1,
        steps_per_epoch=2,
        batch_size=2,
        lr=1e-3,
        lr_decay_epoch=1,
        patch_size=8,
        scale_max=2.0,
        sample_q=32,
        log_every=0,
    ),
    sr=SRConfig(depth=2, n_blocks=1, hidden=8, chunk_size=256),
    tiling=TilingConfig(patch_size=128),
    synth=SynthConfig(width_px=256, height_px=256, n_craters=10, band_km=(1.0, 2.0), border_px=4.0),
)

PRESETS = {"full": full_config, "desk": desk_config, "test": test_config}
