"""primecert"""
from primecert.version import __version__  # flake8: noqa
from primecert.numerics import ExpOf
from primecert.numerics import arithmetic
from primecert.zeta_data import DEFAULT_CONSTANTS
from primecert.zeta_data import ZetaConstants
from primecert.certifier import Certificate
from primecert.certifier import CertParams
from primecert.certifier import Verdict
from primecert.certifier import certify
from primecert.certifier import derive_params
from primecert.optimizer import SearchSpec
from primecert.optimizer import optimize
from primecert.optimizer import reproduce_table
from primecert.ledger import CertificateLedger
