"""Simulation, offline optima, instance generation and reporting."""
from .audit import audit_run
from .generate import FAMILIES, GenParams, gen_random, gen_set_cover_lb
from .opt import OptResult, opt, opt_deadline, opt_delay
from .report import emit_report, report_row
from .simulate import RunReport, SimConfig, simulate
from .spec import DEADLINE, DELAY, InstanceSpec, RequestSpec, load, loads, dumps, save
