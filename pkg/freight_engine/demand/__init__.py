"""O-D 需求模块"""
