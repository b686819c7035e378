#ifndef CONTDIAG_CONTDIAG_HPP
#define CONTDIAG_CONTDIAG_HPP

#include "contdiag/diagrams.hpp"
#include "contdiag/dyadic.hpp"
#include "contdiag/errors.hpp"
#include "contdiag/formula.hpp"
#include "contdiag/gamma.hpp"
#include "contdiag/godel.hpp"
#include "contdiag/infinitary.hpp"
#include "contdiag/io.hpp"
#include "contdiag/ordinal.hpp"
#include "contdiag/parser.hpp"
#include "contdiag/presentation.hpp"
#include "contdiag/relation.hpp"
#include "contdiag/signature.hpp"
#include "contdiag/structures.hpp"
#include "contdiag/verify.hpp"

#endif
