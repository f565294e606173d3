#ifndef ROBDA_DATASET_HPP
#define ROBDA_DATASET_HPP

#include "robda/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace robda {

/// n x p feature matrix with one class label per row.
///
/// Labels are zero-based class indices into class_names(); every class must
/// occur at least once and every feature must be finite. The invariants are
/// checked on construction, so a LabeledDataset in hand is always valid.
class LabeledDataset {
public:
    LabeledDataset(Eigen::MatrixXd features,
                   std::vector<std::size_t> labels,
                   std::vector<std::string> class_names,
                   std::vector<std::string> feature_names = {})
        : features_(std::move(features)),
          labels_(std::move(labels)),
          class_names_(std::move(class_names)),
          feature_names_(std::move(feature_names)) {
        validate();
    }

    std::size_t n() const noexcept { return static_cast<std::size_t>(features_.rows()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(features_.cols()); }
    std::size_t num_classes() const noexcept { return class_names_.size(); }

    const Eigen::MatrixXd& features() const noexcept { return features_; }
    const std::vector<std::size_t>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }

    std::size_t label(std::size_t i) const { return labels_.at(i); }
    auto row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)); }

    std::vector<std::size_t> class_sizes() const {
        std::vector<std::size_t> sizes(num_classes(), 0);
        for (auto g : labels_) ++sizes[g];
        return sizes;
    }

    std::vector<std::size_t> indices_of_class(std::size_t g) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == g) idx.push_back(i);
        return idx;
    }

    Eigen::MatrixXd rows_of_class(std::size_t g) const {
        const auto idx = indices_of_class(g);
        Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), features_.cols());
        for (std::size_t k = 0; k < idx.size(); ++k)
            out.row(static_cast<Eigen::Index>(k)) = features_.row(static_cast<Eigen::Index>(idx[k]));
        return out;
    }

    /// Same cases with class indices remapped onto `names` (e.g. a fitted
    /// model's class order). Every class of this dataset must appear in `names`.
    LabeledDataset with_class_order(const std::vector<std::string>& names) const {
        std::vector<std::size_t> map(num_classes());
        for (std::size_t g = 0; g < num_classes(); ++g) {
            std::size_t k = 0;
            while (k < names.size() && names[k] != class_names_[g]) ++k;
            if (k == names.size())
                throw DataError("class '" + class_names_[g] + "' is not among the expected classes");
            map[g] = k;
        }
        std::vector<std::size_t> relabeled(labels_.size());
        for (std::size_t i = 0; i < labels_.size(); ++i) relabeled[i] = map[labels_[i]];
        return LabeledDataset(features_, std::move(relabeled), names, feature_names_);
    }

    bool operator==(const LabeledDataset& other) const {
        return labels_ == other.labels_ && class_names_ == other.class_names_ &&
               features_.rows() == other.features_.rows() &&
               features_.cols() == other.features_.cols() && features_ == other.features_;
    }

private:
    void validate() const {
        if (static_cast<std::size_t>(features_.rows()) != labels_.size())
            throw DataError("feature matrix has " + std::to_string(features_.rows()) +
                            " rows but " + std::to_string(labels_.size()) + " labels were given");
        if (class_names_.empty()) throw DataError("dataset has no classes");
        if (!feature_names_.empty() && feature_names_.size() != p())
            throw DataError("feature name count does not match column count");
        for (Eigen::Index i = 0; i < features_.rows(); ++i)
            for (Eigen::Index j = 0; j < features_.cols(); ++j)
                if (!std::isfinite(features_(i, j)))
                    throw DataError("non-finite feature at row " + std::to_string(i) +
                                    ", column " + std::to_string(j));
        std::vector<bool> seen(class_names_.size(), false);
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i] >= class_names_.size())
                throw DataError("label out of range at row " + std::to_string(i));
            seen[labels_[i]] = true;
        }
        for (std::size_t g = 0; g < seen.size(); ++g)
            if (!seen[g]) throw DataError("class '" + class_names_[g] + "' has no cases");
    }

    Eigen::MatrixXd features_;
    std::vector<std::size_t> labels_;
    std::vector<std::string> class_names_;
    std::vector<std::string> feature_names_;
};

} // namespace robda

#endif // ROBDA_DATASET_HPP
