"""Static checker for oblivious execution of blinded data, with a dynamic oracle."""

import json

from . import _oblint

__all__ = ["diagnostics", "analyze", "annotate", "run_oracle"]


def diagnostics(text):
    """Parse and validation messages for a module, empty when it is well formed."""
    return _oblint.diagnostics(text)


def analyze(text, name="<string>", cloning=True, check_varlat=False, max_rounds=32, clone_budget=64):
    return json.loads(
        _oblint.analyze(text, name, cloning=cloning, check_varlat=check_varlat,
                        max_rounds=max_rounds, clone_budget=clone_budget)
    )


def annotate(text, cloning=True):
    return _oblint.annotate(text, cloning=cloning)


def run_oracle(text, harness, cloning=True, check_varlat=False, seed=None):
    if not isinstance(harness, str):
        harness = json.dumps(harness)
    return json.loads(_oblint.run_oracle(text, harness, cloning=cloning,
                                         check_varlat=check_varlat, seed=seed))
