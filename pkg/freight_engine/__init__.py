"""道路-铁路多式联运货运均衡配流引擎"""

__version__ = "0.1.0"
