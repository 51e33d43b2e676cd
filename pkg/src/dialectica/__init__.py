"""Dialectica as reverse-mode differentiation, with its categorical lens semantics."""
