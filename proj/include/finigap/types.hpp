// Basic scalar types, windowed sequences and the error hierarchy shared by
// all finigap modules.

#ifndef FINIGAP_TYPES_HPP
#define FINIGAP_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace finigap {

using Real = double;
using Complex = std::complex<Real>;

inline constexpr Real pi = 3.14159265358979323846264338327950288;

struct Error : std::runtime_error {
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

#define FINIGAP_DEFINE_ERROR(name)                                            \
    struct name : Error {                                                     \
        explicit name(const std::string &msg) : Error(#name ": " + msg) {}    \
    }

FINIGAP_DEFINE_ERROR(InvalidCurve);
FINIGAP_DEFINE_ERROR(QuadratureFailure);
FINIGAP_DEFINE_ERROR(SingularCurve);
FINIGAP_DEFINE_ERROR(TruncationTooSmall);
FINIGAP_DEFINE_ERROR(PathThroughBranchPoint);
FINIGAP_DEFINE_ERROR(RootOutsideGap);
FINIGAP_DEFINE_ERROR(NoConvergence);
FINIGAP_DEFINE_ERROR(AmbiguousSlit);
FINIGAP_DEFINE_ERROR(ThetaZero);
FINIGAP_DEFINE_ERROR(PoleAtMu);
FINIGAP_DEFINE_ERROR(BranchPoint);
FINIGAP_DEFINE_ERROR(InstabilityDetected);
FINIGAP_DEFINE_ERROR(UnsupportedPoint);
FINIGAP_DEFINE_ERROR(RootRefinementFailure);
FINIGAP_DEFINE_ERROR(DegenerateZero);
FINIGAP_DEFINE_ERROR(BandEdge);
FINIGAP_DEFINE_ERROR(GreenSolverFailure);
FINIGAP_DEFINE_ERROR(SlitAmbiguity);
FINIGAP_DEFINE_ERROR(NotPositive);
FINIGAP_DEFINE_ERROR(IllConditioned);
FINIGAP_DEFINE_ERROR(ConsistencyFailure);
FINIGAP_DEFINE_ERROR(TailTruncationTooLarge);
FINIGAP_DEFINE_ERROR(InvalidData);

#undef FINIGAP_DEFINE_ERROR

/// Closed integer index range [lo, hi].
struct IndexRange {
    int lo = 0;
    int hi = 0;
    int size() const { return hi - lo + 1; }
    bool contains(int n) const { return n >= lo && n <= hi; }
};

/// Sequence indexed by integers in a window [lo, hi].
template <typename T>
class Seq {
  public:
    Seq() = default;
    explicit Seq(IndexRange r, T fill = T{}) : range_(r), v_(static_cast<size_t>(r.size()), fill) {}
    IndexRange range() const { return range_; }
    int lo() const { return range_.lo; }
    int hi() const { return range_.hi; }
    T &operator[](int n) { return v_[static_cast<size_t>(n - range_.lo)]; }
    const T &operator[](int n) const { return v_[static_cast<size_t>(n - range_.lo)]; }
    const std::vector<T> &raw() const { return v_; }

  private:
    IndexRange range_;
    std::vector<T> v_;
};

using RealSeq = Seq<Real>;
using ComplexSeq = Seq<Complex>;

inline Real sq(Real x) { return x * x; }
inline Complex sq(Complex x) { return x * x; }

} // namespace finigap

#endif
