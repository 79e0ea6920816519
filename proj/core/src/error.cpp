#include "tbcodes/error.hpp"

namespace tb {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::shape: return "shape";
        case ErrorKind::validation: return "validation";
        case ErrorKind::capacity: return "capacity";
        case ErrorKind::contract: return "contract";
        case ErrorKind::scheduling: return "scheduling";
        case ErrorKind::hypergraph: return "hypergraph";
        case ErrorKind::infeasible: return "infeasible";
        case ErrorKind::parse: return "parse";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

void fail(ErrorKind kind, const std::string& detail) {
    throw Error(kind, detail);
}

}  // namespace tb
