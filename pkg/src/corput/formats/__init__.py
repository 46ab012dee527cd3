# Table emitters
