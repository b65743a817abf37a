"""Config factory shared across the suite.

Lives in its own module (not conftest) so test files can import it by a
unique name; two test trees are collected in one run and each has a
conftest.py, which makes ``import conftest`` ambiguous.
"""

from qecdesk import config


def make_cfg(**overrides):
    """A valid planar-3 config; keyword overrides for variants."""
    base = dict(kind="planar", size=3, p_data=0.01, q_meas=0.0, window=1,
                seed=7)
    for alias in ("d", "l"):
        if alias in overrides:
            overrides["size"] = overrides.pop(alias)
    base.update(overrides)
    return config.DecoderConfig(**base)
