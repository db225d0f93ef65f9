#ifndef IOPP_IOPP_HPP
#define IOPP_IOPP_HPP

#include "iopp/constraint.hpp"
#include "iopp/decide.hpp"
#include "iopp/error.hpp"
#include "iopp/format.hpp"
#include "iopp/oracle.hpp"
#include "iopp/parse.hpp"
#include "iopp/protocol.hpp"
#include "iopp/reach.hpp"
#include "iopp/tm.hpp"

#endif  // IOPP_IOPP_HPP
