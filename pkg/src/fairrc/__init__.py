"""Repeated-consensus ledger constructions with a censorship-resistant fusion
layer, a deterministic protocol simulator, and an offline trace checker."""

from .core import (
    GENESIS,
    Block,
    Certificate,
    CertificateEntry,
    Signature,
    Transaction,
    Transfer,
    flatten_chain_to_log,
    hash_block,
    log_to_chain,
    make_transaction,
    sign,
    verify,
)
from .validity import (
    AccountModel,
    FusionModel,
    SetModel,
    check_fair_fusion,
    make_model,
    valid_chain,
    valid_log,
)
from .frc import certified_valid_chain
from .adversary import AdversarySpec
from .scenario import ConfigError, Scenario, load_scenario, save_scenario
from .simulation import RunResult, Simulation, run_scenario
from .checker import Verdict, check_trace, exit_code, transaction_fates
from .harness import main, run_and_check

__all__ = [
    "GENESIS", "Block", "Certificate", "CertificateEntry", "Signature",
    "Transaction", "Transfer", "flatten_chain_to_log", "hash_block",
    "log_to_chain", "make_transaction", "sign", "verify",
    "AccountModel", "FusionModel", "SetModel", "check_fair_fusion",
    "make_model", "valid_chain", "valid_log", "certified_valid_chain",
    "AdversarySpec", "ConfigError", "Scenario", "load_scenario",
    "save_scenario", "RunResult", "Simulation", "run_scenario",
    "Verdict", "check_trace", "exit_code", "transaction_fates",
    "main", "run_and_check",
]
