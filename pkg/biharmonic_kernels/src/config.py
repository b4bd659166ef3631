'''
    Run configuration: defaults from setting.py, then a JSON config file, then CLI flags.

    Config file schema:
    ```
    {
        "n": 5,
        "seed": 7,
        "workers": 1,
        "output": "reports/kernels.json",
        "format": "json",
        "quadrature": {"target_tol": 1e-6, "max_refinements": 4, "radial_nodes": 16, "sphere_order": 8},
        "stencil": {"h": 1e-3, "order": 4},
        "options": {"pair": "0,1"}
    }
    ```
'''
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from biharmonic_kernels.geometry.points import Dimension
from biharmonic_kernels.operators.stencils import StencilConfig
from biharmonic_kernels.solver.quadrature import QuadratureConfig
from biharmonic_kernels.src import setting
from biharmonic_kernels.src.exceptions import ContractError, DomainError, HarnessError

FORMATS = ('json', 'csv')
TOP_LEVEL_KEYS = ('n', 'seed', 'workers', 'output', 'format', 'quadrature', 'stencil', 'options')
QUADRATURE_KEYS = tuple(f.name for f in dataclasses.fields(QuadratureConfig))
STENCIL_KEYS = tuple(f.name for f in dataclasses.fields(StencilConfig))
# flags that land inside a nested section
FLAG_ALIASES = {'tol': ('quadrature', 'target_tol')}


@dataclass(frozen=True)
class RunConfig:
    n: int = 5
    seed: int = setting.DEFAULT_SEED
    workers: int = setting.QUADRATURE_WORKERS
    output: str | None = None
    format: str = 'json'
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    stencil: StencilConfig = field(default_factory=StencilConfig)
    options: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        Dimension.of(self.n)
        if self.n < 2:
            raise DomainError(f"Dimension must satisfy n >= 2, got {self.n}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or self.seed < 0:
            raise DomainError(f"Seed must be a nonnegative integer, got {self.seed}")
        if self.format not in FORMATS:
            raise DomainError(f"Format must be one of {FORMATS}, got '{self.format}'")

    def as_dict(self) -> dict:
        """Plain values, as recorded in report headers."""
        return {
            'n': self.n, 'seed': self.seed, 'workers': self.workers, 'format': self.format,
            'quadrature': dataclasses.asdict(self.quadrature), 'stencil': dataclasses.asdict(self.stencil),
            'options': dict(self.options),
        }


def _read_file(path: str | Path) -> dict:
    try:
        with open(path, 'r') as f:
            data = json.load(f)
    except OSError as e:
        raise HarnessError(f"Cannot read config file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ContractError(f"Config file {path} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ContractError(f"Config file {path} must hold a JSON object")
    return data


def _check_keys(section: str, data: Mapping[str, Any], allowed: tuple[str, ...]) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ContractError(f"Unknown {section} keys {unknown}, expected some of {list(allowed)}")


def load_run_config(path: str | Path | None = None, overrides: Mapping[str, Any] | None = None) -> RunConfig:
    '''
    Merge defaults, the JSON file at `path` and flag `overrides`; flags win over the file.

    Overrides set to None are ignored, so unset click options leave the file values alone.

    Raises:
        ContractError: unknown keys in the file or the overrides, or malformed JSON.
        DomainError: values outside the module contracts (target_tol <= 0, order not in {2, 4}, ...).
        HarnessError: the file cannot be read.
    '''
    merged: dict[str, Any] = {'quadrature': {}, 'stencil': {}, 'options': {}}
    if path is not None:
        data = _read_file(path)
        _check_keys('config', data, TOP_LEVEL_KEYS)
        for key, value in data.items():
            if key in ('quadrature', 'stencil', 'options'):
                if not isinstance(value, dict):
                    raise ContractError(f"Config section '{key}' must be an object")
                merged[key].update(value)
            else:
                merged[key] = value
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key in FLAG_ALIASES:
            section, name = FLAG_ALIASES[key]
            merged[section][name] = value
        elif key in ('quadrature', 'stencil', 'options'):
            merged[key].update(value)
        elif key in TOP_LEVEL_KEYS:
            merged[key] = value
        else:
            raise ContractError(f"Unknown override '{key}'")
    _check_keys('quadrature', merged['quadrature'], QUADRATURE_KEYS)
    _check_keys('stencil', merged['stencil'], STENCIL_KEYS)
    workers = int(merged.get('workers', setting.QUADRATURE_WORKERS))
    quadrature = QuadratureConfig(**{'workers': workers, **merged.pop('quadrature')})
    stencil = StencilConfig(**merged.pop('stencil'))
    return RunConfig(quadrature=quadrature, stencil=stencil, **merged)
