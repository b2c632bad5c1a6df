from .dimacs import dumps_cnf, dumps_wcnf, loads_cnf, loads_wcnf, read_cnf, read_wcnf, write_cnf, write_wcnf
from .encodings import (
    build_counter,
    build_ladder,
    encode_at_most_k,
    encode_at_most_one,
    encode_exactly_one,
    encode_order,
    encode_parity_even,
)
from .formula import CnfFormula, EncodingError, Model, VarRegistry, WcnfFormula
from .solve import (
    EXTERNAL_CMD_ENV,
    IncrementalSolver,
    MaxSatResult,
    ModelCheckError,
    SatResult,
    Status,
    check_model,
    solve_maxsat,
    solve_maxsat_external,
    soft_cost,
    stratify,
    solve_sat,
)

export_wcnf = write_wcnf
