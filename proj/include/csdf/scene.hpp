#pragma once

#include "csdf/core.hpp"
#include "csdf/field.hpp"

#include <memory>
#include <string>
#include <vector>

namespace csdf {

struct SceneComponent {
    std::string name;
    std::shared_ptr<const LatentField> field;
    LatentVector latent;
};

struct Scene {
    std::vector<SceneComponent> components;
    BoundingBox bbox;

    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < components.size(); ++i)
            if (components[i].name == name) return int(i);
        return -1;
    }
    const SceneComponent& at(const std::string& name) const {
        int i = index_of(name);
        if (i < 0) throw ConfigurationError("unknown scene component '" + name + "'");
        return components[std::size_t(i)];
    }
    void validate() const {
        for (std::size_t i = 0; i < components.size(); ++i) {
            if (!components[i].field)
                throw ConfigurationError("component '" + components[i].name + "' has no field");
            components[i].field->check_latent(components[i].latent);
            for (std::size_t j = i + 1; j < components.size(); ++j)
                if (components[i].name == components[j].name)
                    throw ConfigurationError("duplicate component name '" + components[i].name + "'");
        }
        if (!bbox.valid()) throw ConfigurationError("scene bbox must satisfy min < max");
    }
};

} // namespace csdf
