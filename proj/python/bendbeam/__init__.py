# SPDX-License-Identifier: Apache-2.0
"""Curved-beam near-field wavefront simulator."""

import json as _json

from ._core import (
    DomainError,
    ResourceError,
    ValidationError,
    __version__,
    aaf_field,
    airy_field,
    airy_fwhm,
    airy_peak_offset,
    codeword_csv,
    focal_distance,
    fraunhofer_distance,
    grating_orders,
    list_presets,
    make_medium,
    parabolic_phase,
    preset_config,
    propagate,
    quantize_phases,
    run_config as _run_config,
    z_max,
)


def run_config(config, out_dir, reduced=False):
    """Runs a config (dict or JSON text) and returns the manifest as a dict."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _json.loads(_run_config(text, str(out_dir), reduced))


def run_preset(name, out_dir, reduced=True, seed=None):
    cfg = _json.loads(preset_config(name))
    if seed is not None:
        cfg["seed"] = seed
    return run_config(cfg, out_dir, reduced)
