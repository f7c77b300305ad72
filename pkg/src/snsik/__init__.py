"""Velocity-level kinematic control of redundant arms under hard joint and
Cartesian inequality constraints, handled by saturating the most critical
limit in the null space of the task (with optimal task scaling as fallback).
"""

__version__ = "0.1.0"

from .constraints import (
    AugmentedSystem,
    CartesianConstraint,
    JointLimits,
    RowTag,
    build_augmented,
    shape_cartesian_box,
    shape_joint_box,
)
from .kinematics import (
    AxisSelector,
    FramePoint,
    RobotModel,
    chain_frames,
    forward_position,
    jacobian,
)
from .linalg import null_projector, numerical_rank, pinv
from .oracle import OracleBudgetError, OracleVerdict, oracle_solve
from .sim import (
    Scenario,
    ScenarioError,
    TickLog,
    bundled_scenario,
    bundled_scenario_text,
    load_scenario,
    load_scenario_file,
    read_log,
    run,
    write_log,
)
from .solver import (
    SaturationEntry,
    SaturationRecord,
    ScalingResult,
    SingularTaskError,
    SnsSolution,
    SolverDivergenceError,
    TaskRef,
    min_norm_solution,
    sns_solve,
    task_scaling_factor,
)
from .trajectory import (
    CirclePath,
    FeedbackLaw,
    LinePath,
    QuinticTiming,
    TrapezoidTiming,
    path_eval,
    task_axes,
    task_reference,
    timing_eval,
)
