#include "taco/error.hpp"

namespace taco {

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Validation:
        case ErrorKind::Io:
            return 2;
        case ErrorKind::Provider:
            return 3;
        case ErrorKind::ParseFatal:
            return 4;
    }
    return 2;
}

}  // namespace taco
