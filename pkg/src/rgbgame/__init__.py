"""Exact toolkit for the three-colour nonlocal game.

Strategy tables with rational arithmetic, the winning-strategy family and
its unique no-signalling member, wiring reductions to and from the binary
XOR box, simulation of the optimal qubit strategy, and primal/dual
certificates for the quantum bound of the associated Bell inequality.
"""

from .strategies import (
    BLUE,
    GREEN,
    RED,
    Game,
    StrategyTable,
    WinningFamilyParams,
    chsh_game,
    deterministic_strategy,
    enumerate_winning_deterministic_boxes,
    family_strategy,
    l1_distance,
    l1_distance_to_set,
    local_bound,
    mix,
    next_colour,
    parameter_names,
    prev_colour,
    rgb0,
    rgb_game,
    rgb_predicate,
    rgrb,
    win_probability,
)
from .locality import (
    Direction,
    LinearSystem,
    OneWayProtocol,
    SignallingError,
    SignallingWitness,
    build_ns_constraints,
    decompose_one_way,
    id_box,
    is_no_signalling,
    is_symmetric,
    l_sig_box,
    pr_box,
    r_sig_box,
    recompose_one_way,
    sig_box,
    solve_ns_unique,
    x_marginal,
    y_marginal,
)
from .wiring import (
    WiringProtocol,
    evaluate_wiring,
    noisy_composition_win,
    noisy_parity_survival,
    noisy_pr,
    parity_flip_box,
    pr_from_rgrb,
    rgrb_from_pr,
)
from .quantum import (
    QubitStrategy,
    correlations_from_table,
    joint_prob,
    projector_from_angle,
    quantum_strategy_table,
    reduce_to_binary,
    singlet,
    trine_projectors,
    trine_strategy,
)
from .bell import (
    AscentResult,
    CertificateReport,
    CertificationError,
    VectorStrategy,
    alternating_ascent,
    bell_quantity,
    certify_quantum_bound,
    deterministic_bell_maximum,
    gram_from_vectors,
    lemma1_win,
    optimal_gram,
    optimal_multipliers,
    sym_eigenvalues,
    verify_dual,
    verify_primal,
    w_matrix,
    win_from_correlations,
)
from .formats import (
    BoxFormatError,
    WiringFormatError,
    box_from_json_dict,
    box_to_json_dict,
    dump_box,
    dump_wiring,
    load_box,
    load_box_file,
    load_wiring,
    load_wiring_file,
    save_box,
    save_wiring,
    wiring_from_json_dict,
    wiring_to_json_dict,
)

__version__ = "0.1.0"
