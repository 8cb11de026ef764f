#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tt {

struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

struct unknown_letter : error {
    explicit unknown_letter(const std::string& what) : error(what) {}
};

struct empty_generator_set : error {
    empty_generator_set() : error("empty generator set") {}
};

struct zero_matrix : error {
    zero_matrix() : error("transition matrix is zero: no edge maps over any edge") {}
};

struct not_irreducible : error {
    std::vector<int> witness;  // proper invariant set of edge-orbit indices
    explicit not_irreducible(std::vector<int> w)
        : error("transition matrix is not irreducible"), witness(std::move(w)) {}
};

struct not_a_vertex_image : error {
    explicit not_a_vertex_image(const std::string& what) : error(what) {}
};

struct illegal_fold_request : error {
    explicit illegal_fold_request(const std::string& what) : error(what) {}
};

struct not_valence_one : error {
    explicit not_valence_one(const std::string& what) : error(what) {}
};

struct not_valence_two : error {
    explicit not_valence_two(const std::string& what) : error(what) {}
};

struct not_one_gate : error {
    explicit not_one_gate(const std::string& what) : error(what) {}
};

struct collapsed_edge_image : error {
    explicit collapsed_edge_image(const std::string& what) : error(what) {}
};

struct non_expanding : error {
    explicit non_expanding(const std::string& what) : error(what) {}
};

struct power_budget_exhausted : error {
    explicit power_budget_exhausted(const std::string& what) : error(what) {}
};

struct unbounded_cancellation : error {
    explicit unbounded_cancellation(const std::string& what) : error(what) {}
};

struct legal_cycle_in_parabolic : error {
    explicit legal_cycle_in_parabolic(const std::string& what) : error(what) {}
};

struct horizon_exceeded : error {
    explicit horizon_exceeded(const std::string& what) : error(what) {}
};

struct depth_exhausted : error {
    explicit depth_exhausted(const std::string& what) : error(what) {}
};

struct no_critical_constant : error {
    explicit no_critical_constant(const std::string& what) : error(what) {}
};

struct group_is_z : error {
    group_is_z() : error("rank-1 input excluded: the group is Z") {}
};

struct trivial_element : error {
    trivial_element() : error("trivial element") {}
};

struct zero_length : error {
    zero_length() : error("empty path has no length fraction") {}
};

struct injectivity_anomaly : error {
    explicit injectivity_anomaly(const std::string& what) : error(what) {}
};

struct schema_error : error {
    explicit schema_error(const std::string& what) : error(what) {}
};

}  // namespace tt
