from indefinite_oga.linalg.dense import GramSystem, SpanFactor, solve_symmetric

__all__ = ['GramSystem', 'SpanFactor', 'solve_symmetric']
