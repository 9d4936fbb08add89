#include "carnot/group.hpp"

#include <cmath>

#include "carnot/error.hpp"

namespace carnot {

CarnotGroup::CarnotGroup(StratificationSpec spec) : algebra_(std::move(spec)), bch_(algebra_.step()) {}

GroupPtr CarnotGroup::create(StratificationSpec spec) {
  return GroupPtr(new CarnotGroup(std::move(spec)));
}

void CarnotGroup::check_lambda(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda)) throw DomainError("dilation factor must be finite and nonzero");
}

Vector CarnotGroup::product_bound(const Vector& pa, const Vector& qa) const {
  auto rem = bch_.remainder_bound(pa, qa, [this](const Vector& a, const Vector& b) {
    return algebra_.bracket_bound(a, b);
  });
  return pa + qa + rem;
}

bool CarnotGroup::same_as(const CarnotGroup& other) const {
  return this == &other || same_structure(spec(), other.spec());
}

void require_same_group(const CarnotGroup& a, const CarnotGroup& b) {
  if (!a.same_as(b)) throw SpecMismatch("operands belong to different groups: '" + a.name() + "' and '" + b.name() + "'");
}

GroupPoint::GroupPoint(GroupPtr group, Vector coords) : group_(std::move(group)), coords_(coords) {
  if (!group_) throw SpecMismatch("GroupPoint needs a group");
  if (static_cast<int>(coords_.size()) != group_->dim())
    throw SpecMismatch("point has " + std::to_string(coords_.size()) + " coordinates, group '" + group_->name() +
                       "' has dimension " + std::to_string(group_->dim()));
  for (double x : coords_)
    if (!std::isfinite(x)) throw DomainError("point coordinates must be finite");
}

GroupPoint GroupPoint::identity(GroupPtr group) {
  Vector zero = group->identity();
  return GroupPoint(std::move(group), zero);
}

GroupPoint GroupPoint::operator*(const GroupPoint& other) const {
  require_same_group(*group_, *other.group_);
  return GroupPoint(group_, group_->multiply(coords_, other.coords_));
}

GroupPoint GroupPoint::inverse() const { return GroupPoint(group_, group_->inverse(coords_)); }

GroupPoint GroupPoint::dilate(double lambda) const { return GroupPoint(group_, group_->dilate(lambda, coords_)); }

}  // namespace carnot
