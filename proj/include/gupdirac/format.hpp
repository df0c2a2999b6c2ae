#pragma once

#include <string>

namespace gupdirac {

/// Decimal text with 15 significant digits ("%.15g"), as used in every CSV table.
[[nodiscard]] std::string format_number(double x);

} // namespace gupdirac
