#ifndef GRIDATTACK_BUNDLED_DATA_HPP_
#define GRIDATTACK_BUNDLED_DATA_HPP_

#include <string>
#include <utility>
#include <vector>

// Embedded copies of the share/ data files, generated at configure time so
// the binaries are self-contained. share/ is the source of truth.
namespace gridattack::bundled {

extern const std::string kKundurCaseJson;
extern const std::vector<std::pair<std::string, std::string>> kScenarioJson;  // name, text

}  // namespace gridattack::bundled

#endif  // GRIDATTACK_BUNDLED_DATA_HPP_
