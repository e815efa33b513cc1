import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from dataclasses_json import dataclass_json

from craterlens.nn.persistence import load_tensors, save_tensors
from craterlens.utils import FormatError, atomic_write_text
from .model import LiifModel, model_from_parameters, named_parameters

__all__ = ["BundleHeader", "save_bundle", "load_bundle", "COORD_CONVENTION"]

BUNDLE_FORMAT = "craterlens-liif"
BUNDLE_VERSION = 1
COORD_CONVENTION = "pixel-center[-1,1];row-col;rel-and-cell-scaled-by-grid"

HEADER_FILE = "model.json"
ENCODER_MANIFEST, ENCODER_BLOB = "encoder.json", "encoder.bin"
MLP_MANIFEST, MLP_BLOB = "mlp.json", "mlp.bin"


@dataclass_json
@dataclass
class BundleHeader:
    """Architecture description stored next to the weights.

    Attributes
    ----------
    depth: int
        Encoder feature channels D.
    n_blocks: int
        Residual blocks in the encoder.
    mlp_widths: list[int]
        Decoder layer widths, input first.
    coord_convention: str
        Tag of the coordinate and cell conventions the weights were trained with.
    provenance: dict, optional
        Version, configuration digest and seed of the producing run.
    """

    depth: int
    n_blocks: int
    mlp_widths: list[int]
    coord_convention: str = COORD_CONVENTION
    format: str = BUNDLE_FORMAT
    version: int = BUNDLE_VERSION
    provenance: Optional[dict[str, Any]] = field(default=None)


def save_bundle(model: LiifModel, directory: str | os.PathLike, provenance: Optional[dict[str, Any]] = None):
    """Writes the model as a header plus one tensor manifest and blob each for encoder and decoder."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    params = named_parameters(model)
    save_tensors(
        {k: v for k, v in params.items() if k.startswith("encoder.")}, out / ENCODER_MANIFEST, out / ENCODER_BLOB
    )
    save_tensors({k: v for k, v in params.items() if k.startswith("mlp.")}, out / MLP_MANIFEST, out / MLP_BLOB)
    header = BundleHeader(
        depth=model.depth, n_blocks=model.n_blocks, mlp_widths=model.mlp.widths, provenance=provenance
    )
    atomic_write_text(out / HEADER_FILE, json.dumps(header.to_dict(), indent=4, sort_keys=True) + "\n")  # type: ignore


def load_bundle(directory: str | os.PathLike) -> LiifModel:
    src = Path(directory)
    try:
        header: BundleHeader = BundleHeader.from_dict(json.loads((src / HEADER_FILE).read_text()))  # type: ignore
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise FormatError(f"Invalid model header: {e}", path=str(src / HEADER_FILE)) from e
    if header.format != BUNDLE_FORMAT or header.version != BUNDLE_VERSION:
        raise FormatError(f"Unsupported bundle {header.format} v{header.version}", path=str(src / HEADER_FILE))
    if header.coord_convention != COORD_CONVENTION:
        raise FormatError(f"Unknown coordinate convention {header.coord_convention!r}", path=str(src / HEADER_FILE))

    params = load_tensors(src / ENCODER_MANIFEST, src / ENCODER_BLOB)
    params.update(load_tensors(src / MLP_MANIFEST, src / MLP_BLOB))
    try:
        model = model_from_parameters(header.depth, header.n_blocks, params)
    except KeyError as e:
        raise FormatError(f"Missing tensor {e}", path=str(src)) from e
    if model.mlp.widths != header.mlp_widths:
        raise FormatError(f"Decoder widths {model.mlp.widths} differ from header {header.mlp_widths}", path=str(src))
    return model
