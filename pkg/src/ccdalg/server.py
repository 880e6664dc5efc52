"""FastMCP server exposing the library as tools.

Run over stdio with ``python -m ccdalg.server``; needs the ``server`` extra.
"""

import logging
import sys
from functools import lru_cache

from mcp.server.fastmcp import FastMCP
from pydantic import Field

from ccdalg.algebra import product_table
from ccdalg.catalog import Catalog, load_catalog, parse_assignment, resolve_algebra
from ccdalg.cohomology import cohomology_summary
from ccdalg.config import load_settings
from ccdalg.extensions import ExtensionSpec, extension_report, parse_cocycle
from ccdalg.harness import dump_report, verify_catalog
from ccdalg.invariants import fingerprint

logger = logging.getLogger(__name__)

mcp = FastMCP("ccdalg")


@lru_cache(maxsize=1)
def _catalog() -> Catalog:
    return load_catalog(load_settings().catalog_path)


def _algebra(source: str, params: str):
    catalog = _catalog() if source.startswith("catalog:") else None
    return resolve_algebra(source, catalog, parse_assignment(params))


@mcp.tool()
def cohomology(
    name_or_table: str = Field(description='catalog:NAME or a table such as "e1e1=e2, e2e2=e3"'),
    variety: str = Field(default="ccd", description="ccd, jordan or symmetric_all"),
    params: str = Field(default="", description="parameter values, e.g. a=2,b=-1"),
) -> dict:
    """Dimensions of Z², B² and H² with canonical H² representatives."""
    return cohomology_summary(_algebra(name_or_table, params), variety).model_dump()


@mcp.tool()
def invariants(
    name_or_table: str = Field(description='catalog:NAME or a table such as "e1e1=e2, e2e2=e3"'),
    params: str = Field(default="", description="parameter values, e.g. a=2"),
) -> dict:
    """Fingerprint of an algebra: power filtration, annihilator data, generic ranks, identity flags."""
    return fingerprint(_algebra(name_or_table, params)).model_dump()


@mcp.tool()
def extend(
    base: str = Field(description="catalog:NAME or an inline table"),
    cocycle: str = Field(description='terms "i,j,coeff;…", components separated by "|"'),
) -> dict:
    """Central extension of ``base`` by ``cocycle`` with its checks."""
    algebra = _algebra(base, "")
    return extension_report(ExtensionSpec(algebra, parse_cocycle(cocycle, algebra))).model_dump()


@mcp.tool()
def verify_entry(name: str = Field(description="catalog entry name, e.g. C5_41")) -> list[dict]:
    """Run the catalog checks for one entry at all of its sample points."""
    settings = load_settings()
    items = verify_catalog(_catalog(), names=[name], grid_limit=settings.almost_jordan_grid, seed=settings.seed)
    return dump_report(items)


@mcp.tool()
def list_algebras() -> list[dict]:
    """Names, dimensions and parameters of the catalog entries."""
    return [
        {"name": e.name, "dim": e.dim, "params": list(e.param_names), "jordan": e.expected.jordan}
        for e in _catalog().entries
    ]


@mcp.resource("catalog://{name}")
def catalog_entry(name: str) -> str:
    """Product table of a catalog entry."""
    return product_table(_catalog().algebra(name))


if __name__ == "__main__":
    print("starting ccdalg server", file=sys.stderr)
    mcp.run()
    print("ccdalg server ended", file=sys.stderr)
