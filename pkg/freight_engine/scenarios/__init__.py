"""灾害场景生成模块"""
