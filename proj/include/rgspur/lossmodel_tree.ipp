// Tree recursion for loss-tolerant measurements. Level 0 is the encoded
// qubit; a node at level k has branching[k] children. Photons are sampled
// lazily, each at most once.

namespace rgspur {

namespace detail {

template <class Arrived> bool indirect_z(const std::vector<std::size_t> &b, std::size_t level, Arrived &arrived);

template <class Arrived> bool z_measurable(const std::vector<std::size_t> &b, std::size_t level, Arrived &arrived) {
    return arrived() || indirect_z(b, level, arrived);
}

template <class Arrived> bool children_z_measurable(const std::vector<std::size_t> &b, std::size_t level, Arrived &arrived) {
    if (level >= b.size()) {
        return true;
    }
    for (std::size_t i = 0; i < b[level]; ++i) {
        if (!z_measurable(b, level + 1, arrived)) {
            return false;
        }
    }
    return true;
}

// Some child measured in X directly, with all of its own children known in Z.
template <class Arrived> bool indirect_z(const std::vector<std::size_t> &b, std::size_t level, Arrived &arrived) {
    if (level >= b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < b[level]; ++i) {
        if (arrived() && children_z_measurable(b, level + 1, arrived)) {
            return true;
        }
    }
    return false;
}

} // namespace detail

template <class Arrived> bool tree_logical_z(const std::vector<std::size_t> &branching, Arrived &&arrived) {
    if (branching.empty()) {
        return arrived();
    }
    return detail::indirect_z(branching, 0, arrived);
}

template <class Arrived> bool tree_logical_x(const std::vector<std::size_t> &branching, Arrived &&arrived) {
    if (branching.empty()) {
        return arrived();
    }
    bool have_x = false;
    for (std::size_t i = 0; i < branching[0]; ++i) {
        if (arrived()) {
            if (!have_x) {
                have_x = detail::children_z_measurable(branching, 1, arrived);
            }
        } else if (!detail::indirect_z(branching, 1, arrived)) {
            return false;
        }
    }
    return have_x;
}

} // namespace rgspur
