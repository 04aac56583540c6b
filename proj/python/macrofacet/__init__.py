# Copyright 2026 The Macrofacet Authors
# SPDX-License-Identifier: Apache-2.0
"""Macrofacet media: Gaussian-process statistical surfaces as exponential volumes."""

from ._core import (
    ConfigError,
    Error,
    IoError,
    NumericFailure,
    ParameterDomainError,
    __version__,
    beckmann_ndf,
    density,
    empirical_transmittance,
    encode_pfm,
    erf,
    erfc,
    fresnel_conductor,
    gauss_cdf,
    gauss_pdf,
    generalized_lambda,
    generalized_ndf,
    ggx_ndf,
    ndf_from_gdf_quadrature,
    parse_config,
    phase_eval,
    planar_transmittance,
    projected_area,
    render_config,
    roughness_from_kernel,
    transmittance_estimate,
    validate,
    vndf_eval,
)

__all__ = [
    "ConfigError",
    "Error",
    "IoError",
    "NumericFailure",
    "ParameterDomainError",
    "__version__",
    "beckmann_ndf",
    "density",
    "empirical_transmittance",
    "encode_pfm",
    "erf",
    "erfc",
    "fresnel_conductor",
    "gauss_cdf",
    "gauss_pdf",
    "generalized_lambda",
    "generalized_ndf",
    "ggx_ndf",
    "ndf_from_gdf_quadrature",
    "parse_config",
    "phase_eval",
    "planar_transmittance",
    "projected_area",
    "render_config",
    "roughness_from_kernel",
    "transmittance_estimate",
    "validate",
    "vndf_eval",
]
