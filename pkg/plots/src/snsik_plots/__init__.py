"""Post-processing for control CSV logs: tracking-error/scale, joint, and
control-point figures with limit lines and activation-window shading.

This package talks to the simulator only through its file formats (the CSV
log and the scenario text); it imports none of its code.
"""

__version__ = "0.1.0"

from .figures import PlotJob, control_point_figure, error_figure, joint_figure, render
from .logdata import EmptyLogError, LogData, LogFormatError, parse_log, read_log_file
from .scenariometa import ScenarioMeta, ScenarioMetaError, parse_scenario, read_scenario_file
