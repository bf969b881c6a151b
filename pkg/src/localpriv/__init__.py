"""Audit and synthesize local privatization mechanisms as finite channels."""

__version__ = "0.1.0"

from .core import (
    INFINITY,
    Alphabet,
    Channel,
    MetricSpace,
    Prior,
    SecretModel,
    compose,
    log_ratio,
    output_dist,
    posterior,
    validate_channel,
)
from .auditors import (
    AuditReport,
    Notion,
    audit_di,
    audit_geo,
    audit_ldp,
    audit_ldp_delta,
    audit_lip,
    audit_lip_delta,
    audit_lmip,
    audit_mil,
    audit_pufferfish,
)
from .mechanisms import (
    ReportBatch,
    estimate_frequencies,
    make_geo_exp,
    make_geometric,
    make_oue,
    make_rr,
    make_sampling,
    make_wasserstein,
    privatize,
    sample,
)
from .optimizer import (
    DistortionMatrix,
    TradeoffCurve,
    design_mip_channel,
    tradeoff_curve,
    wasserstein_inf,
)
from .anonymity import Dataset, check_k_anonymity, check_l_diversity, equivalence_classes
