#pragma once

#include <stdexcept>
#include <string>

namespace robust_lrt {

// Two families: bad inputs (files, configs, out-of-range data) and numeric
// failures (brackets, convergence, degenerate fits). The CLI maps them to
// exit codes 2 and 3.

class input_error: public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numeric_error: public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite value where a finite one is required.
class numeric_input_error: public numeric_error {
public:
    using numeric_error::numeric_error;
};

class bracket_error: public numeric_error {
public:
    using numeric_error::numeric_error;
};

class convergence_error: public numeric_error {
public:
    using numeric_error::numeric_error;
};

class fit_error: public numeric_error {
public:
    using numeric_error::numeric_error;
};

class calibration_error: public numeric_error {
public:
    using numeric_error::numeric_error;
};

class domain_error: public input_error {
public:
    using input_error::input_error;
};

class grid_error: public input_error {
public:
    using input_error::input_error;
};

class infeasible_band_error: public input_error {
public:
    using input_error::input_error;
};

class seed_error: public input_error {
public:
    using input_error::input_error;
};

class training_error: public input_error {
public:
    using input_error::input_error;
};

} // namespace robust_lrt
