"""python -m freight_engine"""
import sys

from freight_engine.main import main


sys.exit(main())
