"""多方式用户均衡求解模块"""
