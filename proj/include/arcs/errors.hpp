#pragma once

#include <stdexcept>
#include <string>

namespace arcs {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_modulus : error { using error::error; };
struct mixed_moduli : error { using error::error; };
struct not_a_unit : error { using error::error; };
struct not_a_divisor : error { using error::error; };
struct not_primitive : error { using error::error; };
struct not_squarefree : error { using error::error; };
struct not_invertible : error { using error::error; };
struct invalid_arc_set : error { using error::error; };
struct not_an_arc : error { using error::error; };
struct not_odd_prime : error { using error::error; };
struct not_complete : error { using error::error; };
struct too_small : error { using error::error; };
struct cell_not_free : error { using error::error; };
struct invalid_mode : error { using error::error; };
struct malformed_certificate : error { using error::error; };
struct io_failure : error { using error::error; };
struct normalization_failed : error { using error::error; };

} // namespace arcs
