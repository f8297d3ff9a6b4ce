#ifndef KFW_GAUSSIAN_RATIONAL_HPP
#define KFW_GAUSSIAN_RATIONAL_HPP

#include <gmpxx.h>

#include <ostream>
#include <string>

namespace kfw
{

/// Arbitrary-precision rational, always in lowest terms with a positive denominator.
using BigRational = mpq_class;

/// Exact complex rational a + b i.
class GaussianRational
{
public:
	GaussianRational() = default;
	// gmpxx leaves a two-argument mpq_class unreduced; equality needs reduced form
	GaussianRational(BigRational re) : re_(std::move(re)) { re_.canonicalize(); }
	GaussianRational(BigRational re, BigRational im) : re_(std::move(re)), im_(std::move(im))
	{
		re_.canonicalize();
		im_.canonicalize();
	}
	GaussianRational(long n) : re_(n) {}

	static GaussianRational i() { return {BigRational(0), BigRational(1)}; }

	const BigRational &re() const { return re_; }
	const BigRational &im() const { return im_; }

	bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
	bool is_real() const { return sgn(im_) == 0; }
	bool is_imaginary() const { return sgn(re_) == 0; }

	GaussianRational conj() const { return {re_, -im_}; }

	GaussianRational &operator+=(const GaussianRational &o)
	{
		re_ += o.re_;
		im_ += o.im_;
		return *this;
	}
	GaussianRational &operator-=(const GaussianRational &o)
	{
		re_ -= o.re_;
		im_ -= o.im_;
		return *this;
	}
	GaussianRational &operator*=(const GaussianRational &o)
	{
		BigRational r = re_ * o.re_ - im_ * o.im_;
		BigRational m = re_ * o.im_ + im_ * o.re_;
		re_ = std::move(r);
		im_ = std::move(m);
		return *this;
	}
	GaussianRational &operator/=(const BigRational &r)
	{
		re_ /= r;
		im_ /= r;
		return *this;
	}

	friend GaussianRational operator+(GaussianRational a, const GaussianRational &b) { return a += b; }
	friend GaussianRational operator-(GaussianRational a, const GaussianRational &b) { return a -= b; }
	friend GaussianRational operator*(GaussianRational a, const GaussianRational &b) { return a *= b; }
	friend GaussianRational operator/(GaussianRational a, const BigRational &b) { return a /= b; }
	friend GaussianRational operator-(const GaussianRational &a) { return {-a.re_, -a.im_}; }

	friend bool operator==(const GaussianRational &a, const GaussianRational &b)
	{
		return a.re_ == b.re_ && a.im_ == b.im_;
	}
	friend bool operator!=(const GaussianRational &a, const GaussianRational &b) { return !(a == b); }

	std::string to_string() const
	{
		if (sgn(im_) == 0) {
			return re_.get_str();
		}
		if (sgn(re_) == 0) {
			return im_.get_str() + "i";
		}
		return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + im_.get_str() + "i";
	}

	friend std::ostream &operator<<(std::ostream &os, const GaussianRational &g) { return os << g.to_string(); }

private:
	BigRational re_{0};
	BigRational im_{0};
};

} // namespace kfw

#endif
