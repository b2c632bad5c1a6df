"""Compile syndrome-measurement circuits for stabilizer codes onto sparse qubit devices."""
from .arch import CouplingGraph, generate_arch, parse_arch_spec
from .circuit import Circuit, Gate, Metrics, compute_metrics, emit_json, emit_stim_text, expand_swaps
from .codes import Stabilizer, StabilizerCode, generate_code, parse_code_spec
from .kernels import BACKEND as KERNEL_BACKEND
from .partition import compile_partitioned, order_subsets, partition_stabilizers, route_integration
from .pipeline import CompileConfig, CompileResult, compile_code
from .stage1 import MappingSolution, Stage1Config, encode_stage1, solve_stage1, validate_mapping
from .stage2 import Stage2Config, encode_stage2, enumerate_operations, minimize_depth, sequential_schedule
from .verify import PauliFrame, verify_circuit, verify_error_detection, verify_syndrome_extraction

__version__ = "0.1.0"
