"""Reading network files, with a fallback to the bundled examples."""

from __future__ import annotations

from pathlib import Path

from .catalog import Catalog, data_dir, load_catalog
from .qcn import Network, parse_network


def example_dir() -> Path:
    return data_dir() / "examples"


def example_names() -> list[str]:
    return sorted(p.stem for p in example_dir().glob("*.qcn"))


def resolve_path(path: str | Path) -> Path:
    """``path`` itself when it exists, else the bundled example of that name.

    ``examples/fig7a.qcn``, ``fig7a.qcn`` and ``fig7a`` all reach the bundled
    file when no such file exists relative to the working directory.
    """
    p = Path(path)
    if p.is_file():
        return p
    name = p.name if p.suffix else p.name + ".qcn"
    bundled = example_dir() / name
    if bundled.is_file():
        return bundled
    raise FileNotFoundError(f"no such network file: {path}")


def read_network(path: str | Path, catalog: Catalog | None = None) -> Network:
    catalog = catalog or load_catalog()
    p = resolve_path(path)
    return parse_network(p.read_text(encoding="utf-8"), catalog.multialgebra, str(p))


def write_network(N: Network, path: str | Path) -> None:
    Path(path).write_text(N.format(skip_universal=True), encoding="utf-8")
