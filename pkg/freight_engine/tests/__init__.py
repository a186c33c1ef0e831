"""freight_engine 测试"""
