# Copyright 2026 The Sentinel Authors
# SPDX-License-Identifier: Apache-2.0

"""Opcode, calldata and gas-bidding analysis for Ethereum transactions."""

from importlib import import_module as _import_module
from pkgutil import extend_path as _extend_path

# the extension may live in a build tree next to this source package
__path__ = _extend_path(__path__, __name__)

_native = _import_module(__name__ + "._native")

from ._native import (  # noqa: E402
    Autoencoder,
    GbdtModel,
    PcaModel,
    SentinelError,
    SignatureDirectory,
    auc,
    bic_score,
    disassemble,
    feature_schema,
    fit_autoencoder,
    gbdt_from_json,
    is_gas_feature,
    learn_structure,
    load_directory,
    load_gbdt,
    malicious_only_selectors,
    normalize,
    octet_features,
    opcode_table_csv,
    parse_directory,
    pca_fit,
    records_to_features,
    roc_curve,
    roundtrip,
    train_gbdt,
)

__all__ = [name for name in dir() if not name.startswith("_")]
