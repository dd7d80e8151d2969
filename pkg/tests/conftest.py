from __future__ import annotations

import pytest

from commitforge.synthetic import build_filter_repo


@pytest.fixture(scope="session")
def filter_repo(tmp_path_factory):
    """The labelled ~120-commit repository, built once per session."""
    return build_filter_repo(tmp_path_factory.mktemp("fixture") / "labelled")
