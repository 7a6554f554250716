#ifndef FIELDLINT_SRC_CATALOG_DATA_HPP
#define FIELDLINT_SRC_CATALOG_DATA_HPP

#include <map>
#include <string>

namespace fieldlint::detail {

/// File name -> contents of the built-in catalog.
const std::map<std::string, std::string>& embedded_catalog();

}  // namespace fieldlint::detail

#endif  // FIELDLINT_SRC_CATALOG_DATA_HPP
