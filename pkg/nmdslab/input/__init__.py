from nmdslab.input.input import CampaignInput
