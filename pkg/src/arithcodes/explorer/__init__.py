from .experiment import (Bundle, Check, ConfigError, load_config, run_experiment, translate_average,
                         validate_config, write_atomic)
from .params import (ParamReport, feasible_params_add, feasible_params_mult, rate_lower_bound_explicit,
                     reproduce_worked_example, sweep)
