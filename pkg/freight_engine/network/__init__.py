"""多式联运路网模块"""
