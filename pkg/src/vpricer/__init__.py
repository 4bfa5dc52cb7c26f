"""Posted pricing for a unit-demand buyer, benchmarked against Myerson's auction."""

from .auctions import (
    AuctionOutcome,
    Myerson,
    Vickrey,
    auction_revenue,
    expected_virtual_surplus,
    myerson_outcome,
    myerson_revenue_quadrature,
    optimal_reserves,
    vickrey_reserve_outcome,
)
from .distributions import (
    Discrete,
    InstanceError,
    PiecewiseLinearCDF,
    ProductInstance,
    RevenueLinear,
    SizeCapError,
    TruncatedExponential,
    Uniform,
    cdf,
    load_instance,
    parse_instance,
    quantile,
    regularity_report,
    sample,
)
from .ironing import iron, ironed_inverse, ironed_virtual_value, regularize
from .montecarlo import MonteCarlo, RevenueReport
from .oracle import brute_force_optimal, empirical_revenue, enumerate_revenue
from .pricing import (
    ApproxConfig,
    NonregularResult,
    PriceVector,
    best_single_price,
    chi,
    price_approx,
    price_iid,
    price_nonregular,
    price_regular,
    price_vickrey_based,
    pricing_outcome,
    pricing_revenue,
    q_lower_bound,
    solve_nu,
)
from .virtual import NonRegularError, reserve_price, revenue_curve, virtual_value

__version__ = "0.1.0"
