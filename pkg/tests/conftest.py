import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(autouse=True)
def _quiet_rule_of_thumb():
    """Tiny test instances trip the DMU-count advisory constantly."""
    import warnings

    from deacs.dea import RuleOfThumbWarning

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuleOfThumbWarning)
        yield
