from dataclasses import dataclass
from typing import Optional

from dataclasses_json import dataclass_json

__all__ = ["Provenance"]


@dataclass_json
@dataclass(frozen=True)
class Provenance:
    """Identifies the run that produced an output file.

    Attributes
    ----------
    version: str
        Package version.
    config: str
        First 16 hex digits of the configuration digest.
    seed: int, optional
        Seed of the run's random generator.
    """

    version: str
    config: str
    seed: Optional[int] = None

    def comment_line(self) -> str:
        return f"# craterlens {self.version} config={self.config} seed={self.seed}\n"
