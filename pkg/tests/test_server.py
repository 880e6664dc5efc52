import json
import os
import sys
from contextlib import asynccontextmanager
from pathlib import Path

import pytest
from mcp import ClientSession, StdioServerParameters
from mcp.client.stdio import stdio_client

from ccdalg import server

CATALOG = str(Path(__file__).parents[1] / "data" / "catalog.json")


@pytest.fixture
def server_params():
    return StdioServerParameters(
        command=sys.executable,
        args=["-m", "ccdalg.server"],
        env={**os.environ, "CCDALG_CATALOG_PATH": CATALOG},
    )


@asynccontextmanager
async def connect(params):
    async with stdio_client(params) as (read, write):
        async with ClientSession(read, write) as session:
            await session.initialize()
            yield session


async def test_tools_are_listed(server_params):
    async with connect(server_params) as session:
        tools = await session.list_tools()
    assert {t.name for t in tools.tools} == {"cohomology", "invariants", "extend", "verify_entry", "list_algebras"}


async def test_cohomology_tool(server_params):
    async with connect(server_params) as session:
        result = await session.call_tool("cohomology", {"name_or_table": "catalog:C3s_01"})
    assert not result.isError
    payload = json.loads(result.content[0].text)
    assert payload["h2"] == 5
    assert payload["h2_jordan"] == 4


async def test_extend_tool(server_params):
    async with connect(server_params) as session:
        result = await session.call_tool("extend", {"base": "catalog:C3s_01", "cocycle": "2,3,1"})
    payload = json.loads(result.content[0].text)
    assert payload["table"] == "e1e1=e2, e2e3=e4"
    assert payload["in_ts"]


async def test_tool_error_is_reported(server_params):
    async with connect(server_params) as session:
        result = await session.call_tool("invariants", {"name_or_table": "catalog:C9_99"})
    assert result.isError


async def test_catalog_resource(server_params):
    async with connect(server_params) as session:
        resource = await session.read_resource("catalog://C5_41")
    assert resource.contents[0].text == "e1e1=e2, e2e2=e5, e3e4=e5"


@pytest.fixture
def local_catalog(monkeypatch):
    monkeypatch.setenv("CCDALG_CATALOG_PATH", CATALOG)
    server._catalog.cache_clear()
    yield
    server._catalog.cache_clear()


def test_tools_in_process(local_catalog):
    assert server.invariants("catalog:C4_02", "a=2")["square_dim"] == 3
    assert len(server.list_algebras()) == 107
    items = server.verify_entry("C5_41")
    assert items and all(item["pass"] for item in items)
