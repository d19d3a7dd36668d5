"""Prime ideal sum graphs of finite commutative rings and certified genus bounds."""

__version__ = "0.1.0"
