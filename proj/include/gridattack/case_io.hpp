#ifndef GRIDATTACK_CASE_IO_HPP_
#define GRIDATTACK_CASE_IO_HPP_

#include <string>

#include "gridattack/types.hpp"

namespace gridattack::core {

// Parse a case from JSON text (see docs/case_format.md). Validates before
// returning. Throws ParseError / ModelError.
NetworkCase load_case_text(const std::string& json_text);
NetworkCase load_case_file(const std::string& path);

// The bundled two-area testbed.
const NetworkCase& bundled_case();
const std::string& bundled_case_text();

}  // namespace gridattack::core

#endif  // GRIDATTACK_CASE_IO_HPP_
