#include "treealign/error.hpp"

namespace treealign {

void throw_input(const std::string& what) { throw InputError(what); }

}  // namespace treealign
